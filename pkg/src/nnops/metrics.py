"""Error norms, modulus of continuity, convergence rates, and a priori bounds.

Everything here works on plain callables that accept an ndarray of points in
the domain (operator outputs are wrapped the same way), so measured errors
and theoretical bound evaluations share one vocabulary.
"""

from __future__ import annotations

import io
import json
import math
from dataclasses import dataclass

import numpy as np

from .kernels import DegenerateKernelError, Kernel, phi_floor
from .operators import Domain


def _midpoint_grid(domain: Domain, grid_points: int) -> np.ndarray:
    return domain.a + (np.arange(grid_points) + 0.5) * (domain.width / grid_points)


def lp_error(g, h, p: float, domain: Domain, grid_points: int = 100_000) -> float:
    """Composite-midpoint approximation of the L^p distance of g and h.

    (integral over [a, b] of |g - h|^p)^(1/p) on a uniform grid of
    ``grid_points`` cells; the integrand of the operator experiments is
    piecewise smooth with O(n) kinks, which 1e5 cells resolve to published
    precision.
    """
    if not p >= 1.0:
        raise ValueError(f"p must be >= 1, got {p}")
    if grid_points < 2:
        raise ValueError("grid_points must be >= 2")
    xs = _midpoint_grid(domain, grid_points)
    diff = np.abs(np.asarray(g(xs), dtype=float) - np.asarray(h(xs), dtype=float))
    return float((diff**p).sum() * (domain.width / grid_points)) ** (1.0 / p)


def sup_error(g, h, domain: Domain, grid_points: int = 10_000) -> float:
    """Max of |g - h| over the inclusive uniform grid."""
    if grid_points < 2:
        raise ValueError("grid_points must be >= 2")
    xs = np.linspace(domain.a, domain.b, grid_points)
    diff = np.abs(np.asarray(g(xs), dtype=float) - np.asarray(h(xs), dtype=float))
    return float(diff.max())


def modulus_of_continuity(
    f, delta: float, domain: Domain, grid_points: int = 2001
) -> float:
    """Largest oscillation sup |f(x) - f(y)| over grid pairs with |x-y| <= delta."""
    if delta <= 0.0:
        raise ValueError(f"delta must be positive, got {delta}")
    xs = np.linspace(domain.a, domain.b, grid_points)
    fs = np.asarray(f(xs), dtype=float)
    h = domain.width / (grid_points - 1)
    max_off = min(grid_points - 1, int(delta / h + 1e-12))
    best = 0.0
    for j in range(1, max_off + 1):
        best = max(best, float(np.abs(fs[j:] - fs[:-j]).max()))
    return best


def rate_exponent_holder(alpha: float, beta: float) -> float:
    """Sup-error decay exponent (1+alpha)*beta / (1+alpha+beta) for
    Hoelder-beta functions under a kernel of tail exponent alpha."""
    if not alpha > 0.0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    if not 0.0 < beta <= 1.0:
        raise ValueError(f"beta must be in (0, 1], got {beta}")
    return (1.0 + alpha) * beta / (1.0 + alpha + beta)


def kantorovich_rate(alpha: float) -> float:
    """Decay exponent (1+alpha)/(2+alpha) of the K-functional argument."""
    if not alpha > 0.0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    return (1.0 + alpha) / (2.0 + alpha)


def sup_error_bound(
    f,
    n: int,
    delta_n: float,
    kernel: Kernel,
    moment: float,
    domain: Domain,
    grid_points: int = 2001,
) -> float:
    """A priori sup-error bound for the Kantorovich max-min operator.

    omega(f, 1/n) + max(omega(f, delta_n), moment / (phi(2) (n delta_n)^(1+alpha)))
    where omega is the modulus of continuity and ``moment`` the generalized
    absolute moment of order 1+alpha.  Stated with constant 1; the measured
    error should stay below it for any null sequence delta_n with
    n * delta_n -> infinity.
    """
    if delta_n <= 0.0:
        raise ValueError(f"delta_n must be positive, got {delta_n}")
    floor = phi_floor(kernel)
    if floor <= 0.0:
        raise DegenerateKernelError(
            "sup_error_bound needs phi(2) > 0; compact kernels at this scale "
            "have phi(2) = 0"
        )
    omega_n = modulus_of_continuity(f, 1.0 / n, domain, grid_points)
    omega_d = modulus_of_continuity(f, delta_n, domain, grid_points)
    tail = moment / (floor * (n * delta_n) ** (1.0 + kernel.alpha))
    return omega_n + max(omega_d, tail)


@dataclass(frozen=True)
class KFunctionalConstants:
    """Constants of the L^p bound A * K(f, B n^-r) + moment_term * n^-r."""

    A: float
    B: float
    moment_term: float


def kfunctional_constants(
    p: float, domain: Domain, kernel: Kernel, moment: float
) -> KFunctionalConstants:
    """Computable constants of the K-functional error bound.

    A = (2M / (alpha phi(2)) + 2)^(1/p) + (b-a)^(1/(p(1+alpha))),
    B = (3/2) (b-a)^(1/p) / A, and the additive coefficient
    moment_term = m_(1+alpha) (b-a)^(1/p) / phi(2); all three multiply powers
    of n^-(1+alpha)/(2+alpha).
    """
    if not p >= 1.0:
        raise ValueError(f"p must be >= 1, got {p}")
    floor = phi_floor(kernel)
    if floor <= 0.0:
        raise DegenerateKernelError("K-functional constants need phi(2) > 0")
    alpha = kernel.alpha
    width = domain.width
    a_val = (2.0 * kernel.decay_m / (alpha * floor) + 2.0) ** (1.0 / p) + width ** (
        1.0 / (p * (1.0 + alpha))
    )
    b_val = 1.5 * width ** (1.0 / p) / a_val
    return KFunctionalConstants(
        A=a_val, B=b_val, moment_term=moment * width ** (1.0 / p) / floor
    )


def alternative_b(
    constants: KFunctionalConstants,
    p: float,
    domain: Domain,
    kernel: Kernel,
    moment: float,
    g_prime_sup: float,
) -> float:
    """Alternative B constant available when the K-functional minimizer is
    non-constant (g_prime_sup > 0): ((1/2 + max(1, m/(phi(2) |g'|))) w^(1/p)) / A."""
    if g_prime_sup <= 0.0:
        raise ValueError("alternative B needs a non-constant minimizer")
    floor = phi_floor(kernel)
    if floor <= 0.0:
        raise DegenerateKernelError("alternative B needs phi(2) > 0")
    top = (0.5 + max(1.0, moment / (floor * g_prime_sup))) * domain.width ** (1.0 / p)
    return top / constants.A


@dataclass(frozen=True)
class KFunctionalEstimate:
    """Upper estimate of the K-functional from a finite candidate family."""

    value: float
    g_prime_sup: float
    width: float


def kfunctional_upper(
    f,
    delta: float,
    p: float,
    domain: Domain,
    alpha: float,
    widths: tuple[float, ...] | None = None,
    grid_points: int = 4096,
) -> KFunctionalEstimate:
    """Upper estimate of the K-functional K(f, delta)_p.

    The true infimum over C^1 candidates g of
    |f - g|_p^(alpha/(alpha+1)) + delta |g'|_inf is not computable; smoothing
    f with normalized Gaussian windows at a handful of widths gives candidate
    functions whose best score over-estimates the infimum, so bounds priced
    with this estimate remain valid upper bounds.
    """
    if delta <= 0.0:
        raise ValueError(f"delta must be positive, got {delta}")
    if widths is None:
        w = domain.width
        widths = tuple(w * r for r in (1e-3, 4e-3, 1.6e-2, 6.4e-2, 2.56e-1))
    xs = np.linspace(domain.a, domain.b, grid_points)
    dx = domain.width / (grid_points - 1)
    fs = np.asarray(f(xs), dtype=float)

    best: KFunctionalEstimate | None = None
    for width in widths:
        # window no longer than the signal, or convolve('same') grows the output
        half = min(max(1, int(4.0 * width / dx)), (grid_points - 1) // 2)
        t = np.arange(-half, half + 1) * dx
        win = np.exp(-0.5 * (t / width) ** 2)
        # renormalized at the edges so the smoothed values stay in [f_min, f_max]
        gs = np.convolve(fs, win, mode="same") / np.convolve(
            np.ones_like(fs), win, mode="same"
        )
        dist = float((np.abs(fs - gs) ** p).sum() * dx) ** (1.0 / p)
        g_prime = float(np.abs(np.diff(gs)).max() / dx)
        score = dist ** (alpha / (alpha + 1.0)) + delta * g_prime
        if best is None or score < best.value:
            best = KFunctionalEstimate(score, g_prime, width)
    assert best is not None
    return best


def fit_rate(n_values, errors) -> float:
    """Ordinary least-squares slope of log(error) against log(n)."""
    ns = np.asarray(n_values, dtype=float)
    es = np.asarray(errors, dtype=float)
    if len(ns) != len(es) or len(ns) < 3:
        raise ValueError("need at least 3 (n, error) pairs of equal length")
    if np.any(np.diff(ns) <= 0):
        raise ValueError("n values must be strictly increasing")
    if np.any(es <= 0.0):
        raise ValueError("errors must be strictly positive to fit a log-log slope")
    return float(np.polyfit(np.log(ns), np.log(es), 1)[0])


@dataclass(frozen=True)
class ErrorReport:
    """Per-n errors of one operator in one norm, with the fitted rate."""

    operator: str
    p: float  # math.inf marks the sup norm
    n_values: tuple[int, ...]
    errors: tuple[float, ...]
    fitted_rate: float | None = None

    def __post_init__(self) -> None:
        if len(self.n_values) != len(self.errors):
            raise ValueError("n_values and errors must have equal length")
        if any(e < 0.0 for e in self.errors):
            raise ValueError("errors must be nonnegative")


def make_error_report(operator: str, p: float, n_values, errors) -> ErrorReport:
    """Build a report, fitting the log-log rate when 3+ positive errors exist."""
    n_values = tuple(int(n) for n in n_values)
    errors = tuple(float(e) for e in errors)
    rate = None
    if len(n_values) >= 3 and all(e > 0.0 for e in errors):
        rate = fit_rate(n_values, errors)
    return ErrorReport(operator, p, n_values, errors, rate)


def report_to_json(report: ErrorReport) -> str:
    return json.dumps(
        {
            "operator": report.operator,
            "p": "inf" if math.isinf(report.p) else report.p,
            "n_values": list(report.n_values),
            "errors": list(report.errors),
            "fitted_rate": report.fitted_rate,
        }
    )


def report_from_json(text: str) -> ErrorReport:
    d = json.loads(text)
    p = math.inf if d["p"] == "inf" else float(d["p"])
    return ErrorReport(
        d["operator"], p, tuple(d["n_values"]), tuple(d["errors"]), d["fitted_rate"]
    )


def report_to_csv(report: ErrorReport) -> str:
    buf = io.StringIO()
    buf.write("n,error\n")
    for n, e in zip(report.n_values, report.errors):
        buf.write(f"{n},{e:.17g}\n")
    return buf.getvalue()


def report_from_csv(text: str) -> tuple[tuple[int, ...], tuple[float, ...]]:
    """Parse ``n,error`` rows back into (n_values, errors)."""
    lines = [ln for ln in text.strip().splitlines() if ln]
    if lines and lines[0].lower().startswith("n,"):
        lines = lines[1:]
    ns, es = [], []
    for i, ln in enumerate(lines):
        parts = ln.split(",")
        try:
            ns.append(int(parts[0]))
            es.append(float(parts[1]))
        except (IndexError, ValueError) as exc:
            raise ValueError(f"bad report row {i}: {ln!r}") from exc
    return tuple(ns), tuple(es)
