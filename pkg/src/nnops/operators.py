"""The six neural network operators over a common node/window evaluation core.

Three families combine node values v_k with kernel weights w_k = phi(n*x - k):

* ``linear``   sum_k v_k w_k / sum_k w_k
* ``maxprod``  max_k v_k * (w_k / max_d w_d)
* ``maxmin``   max_k min(v_k, w_k / max_d w_d)

and two modes fix the node set and the meaning of v_k:

* ``sampling``     k in ceil(n*a) .. floor(n*b),     v_k = f(k/n)
* ``kantorovich``  k in ceil(n*a) .. floor(n*b) - 1, v_k = cell average of f
                   over [k/n, (k+1)/n]

All families map node values in [0, 1] to outputs in [0, 1] and reproduce
constants exactly.  The max/min families are nonlinear and not homogeneous.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass

import numpy as np

from .kernels import Kernel, eval_kernel

FAMILIES = ("linear", "maxprod", "maxmin")
MODES = ("sampling", "kantorovich")

#: grid chunk size for vectorized evaluation (bounds the weight-matrix memory)
_CHUNK = 4096


class EmptyRangeError(ValueError):
    """The node index range is empty: n is too small for the domain."""


class ZeroDenominatorError(ArithmeticError):
    """Every kernel weight in the window vanished at some evaluation point.

    Only possible with compact-support kernels on sparse node sets; it means
    n is below the regime where the operator is well defined at that point.
    """


@dataclass(frozen=True)
class Domain:
    """Closed interval [a, b]."""

    a: float
    b: float

    def __post_init__(self) -> None:
        if not self.a < self.b:
            raise ValueError(f"domain requires a < b, got [{self.a}, {self.b}]")

    @property
    def width(self) -> float:
        return self.b - self.a


@dataclass(frozen=True)
class OperatorSpec:
    """Family x mode x n x domain x kernel; immutable evaluation recipe."""

    family: str
    mode: str
    n: int
    domain: Domain
    kernel: Kernel

    def __post_init__(self) -> None:
        if self.family not in FAMILIES:
            raise ValueError(f"family must be one of {FAMILIES}, got {self.family!r}")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.n < 1:
            raise ValueError(f"n must be a positive integer, got {self.n}")

    def describe(self) -> str:
        return f"{self.family}/{self.mode} n={self.n} kernel={self.kernel.sigmoid.variant}"


@dataclass(frozen=True)
class NodeData:
    """Node values v_k for k in k_lo .. k_hi, all within [0, 1]."""

    k_lo: int
    k_hi: int
    values: np.ndarray

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=float).copy()
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        expected = self.k_hi - self.k_lo + 1
        if values.ndim != 1 or len(values) != expected:
            raise ValueError(
                f"need {expected} node values for k in {self.k_lo}..{self.k_hi}, "
                f"got {len(values)}"
            )
        if len(values) and (values.min() < 0.0 or values.max() > 1.0):
            raise ValueError("node values must lie in [0, 1]")

    @property
    def ks(self) -> np.ndarray:
        return np.arange(self.k_lo, self.k_hi + 1)


def _stable_ceil(t: float) -> int:
    # round to 12 decimals first so e.g. ceil(2.9999999999999996) stays 3
    return math.ceil(round(t, 12))


def _stable_floor(t: float) -> int:
    return math.floor(round(t, 12))


def node_bounds(mode: str, n: int, domain: Domain) -> tuple[int, int]:
    """Node index range for the given mode; raises EmptyRangeError if empty."""
    k_lo = _stable_ceil(n * domain.a)
    k_hi = _stable_floor(n * domain.b)
    if mode == "kantorovich":
        k_hi -= 1
    if k_lo > k_hi:
        raise EmptyRangeError(
            f"EmptyRange: no {mode} nodes for n={n} on "
            f"[{domain.a}, {domain.b}] (k_lo={k_lo} > k_hi={k_hi})"
        )
    return k_lo, k_hi


def node_range(spec: OperatorSpec) -> tuple[int, int]:
    """Node index range of ``spec``; see :func:`node_bounds`."""
    return node_bounds(spec.mode, spec.n, spec.domain)


def sample_node_values(f, spec: OperatorSpec) -> NodeData:
    """Sampling-mode node data: f evaluated at the nodes k/n.

    ``f`` must accept an ndarray of points in [a, b] and return values in
    [0, 1]; signals use their nearest-sample lookup.
    """
    if spec.mode != "sampling":
        raise ValueError("sample_node_values is for sampling-mode specs")
    k_lo, k_hi = node_range(spec)
    ks = np.arange(k_lo, k_hi + 1)
    return NodeData(k_lo, k_hi, np.asarray(f(ks / spec.n), dtype=float))


def _combine(
    spec: OperatorSpec,
    values: np.ndarray,
    w: np.ndarray,
    xs: np.ndarray,
    offset: int = 0,
):
    """Combine node values with a (len(xs), len(values)) weight matrix."""

    def _zero_error(bad: np.ndarray) -> ZeroDenominatorError:
        i = int(bad[0])
        return ZeroDenominatorError(
            f"ZeroDenominator: all kernel weights vanish at "
            f"x={float(xs[i])!r} (grid index {offset + i})"
        )

    if spec.family == "linear":
        denom = w.sum(axis=1)
        bad = np.flatnonzero(denom == 0.0)
        if len(bad):
            raise _zero_error(bad)
        return (w * values[None, :]).sum(axis=1) / denom
    d = w.max(axis=1)
    bad = np.flatnonzero(d == 0.0)
    if len(bad):
        raise _zero_error(bad)
    r = w / d[:, None]
    if spec.family == "maxmin":
        return np.minimum(values[None, :], r).max(axis=1)
    return (values[None, :] * r).max(axis=1)


def _check_data(spec: OperatorSpec, data: NodeData) -> None:
    k_lo, k_hi = node_range(spec)
    if (data.k_lo, data.k_hi) != (k_lo, k_hi):
        raise ValueError(
            f"node data covers k={data.k_lo}..{data.k_hi} but the spec needs "
            f"k={k_lo}..{k_hi}"
        )


def eval_operator(spec: OperatorSpec, data: NodeData, x: float) -> float:
    """Evaluate the operator at a single point x in [a, b]."""
    d = spec.domain
    if not d.a <= x <= d.b:
        raise ValueError(f"x={x} outside the domain [{d.a}, {d.b}]")
    _check_data(spec, data)
    xs = np.array([float(x)])
    w = eval_kernel(spec.kernel, spec.n * xs[:, None] - data.ks[None, :])
    return float(_combine(spec, data.values, w, xs)[0])


def eval_grid(spec: OperatorSpec, data: NodeData, grid) -> np.ndarray:
    """Evaluate the operator at every grid point.

    Equivalent to mapping :func:`eval_operator` pointwise (bitwise identical:
    per-row reductions do not depend on the chunking).  Errors carry the
    offending grid index.
    """
    xs = np.asarray(grid, dtype=float)
    if xs.ndim != 1:
        raise ValueError("grid must be one-dimensional")
    if len(xs) == 0:
        return np.empty(0)
    d = spec.domain
    if xs.min() < d.a or xs.max() > d.b:
        i = int(np.flatnonzero((xs < d.a) | (xs > d.b))[0])
        raise ValueError(f"grid[{i}]={xs[i]} outside the domain [{d.a}, {d.b}]")
    _check_data(spec, data)
    ks = data.ks
    out = np.empty(len(xs))
    for start in range(0, len(xs), _CHUNK):
        sl = slice(start, min(start + _CHUNK, len(xs)))
        w = eval_kernel(spec.kernel, spec.n * xs[sl, None] - ks[None, :])
        out[sl] = _combine(spec, data.values, w, xs[sl], offset=start)
    return out


# ---------------------------------------------------------------------------
# independent oracle: literal transcription with scalar arithmetic


def _scalar_sigmoid(variant: str, gamma: float, t: float) -> float:
    if variant == "logistic":
        if t >= 0.0:
            return 1.0 / (1.0 + math.exp(-t))
        e = math.exp(t)
        return e / (1.0 + e)
    if variant == "tanh":
        return 0.5 * (math.tanh(t) + 1.0)
    if variant == "ramp":
        if t < -0.5:
            return 0.0
        if t > 0.5:
            return 1.0
        return t + 0.5
    if variant == "three":
        if t < -0.5:
            return 0.0
        if t > 0.5:
            return 1.0
        return 0.5
    # power
    thr = 2.0 ** (1.0 / gamma)
    if t < -thr:
        return 1.0 / (abs(t) ** gamma + 2.0)
    if t > thr:
        tg = t**gamma
        return (tg + 1.0) / (tg + 2.0)
    return 2.0 ** (-1.0 / gamma - 2.0) * t + 0.5


def _scalar_kernel(k: Kernel, t: float) -> float:
    v = k.sigmoid.variant
    g = k.sigmoid.gamma
    ct = k.scale * t
    return 0.5 * (_scalar_sigmoid(v, g, ct + 1.0) - _scalar_sigmoid(v, g, ct - 1.0))


def brute_force_eval(spec: OperatorSpec, data: NodeData, x: float) -> float:
    """Naive scalar evaluation of the same operator, used as a test oracle.

    Transcribes the defining formulas directly with plain Python loops and
    ``math``-module arithmetic; shares no code with :func:`eval_operator`.
    """
    d = spec.domain
    if not d.a <= x <= d.b:
        raise ValueError(f"x={x} outside the domain [{d.a}, {d.b}]")
    _check_data(spec, data)
    n = spec.n
    ks = list(range(data.k_lo, data.k_hi + 1))
    w = [_scalar_kernel(spec.kernel, n * x - k) for k in ks]
    v = [float(t) for t in data.values]
    if spec.family == "linear":
        denom = 0.0
        numer = 0.0
        for wk, vk in zip(w, v):
            denom += wk
            numer += vk * wk
        if denom == 0.0:
            raise ZeroDenominatorError(f"ZeroDenominator: x={x!r}")
        return numer / denom
    dmax = max(w)
    if dmax == 0.0:
        raise ZeroDenominatorError(f"ZeroDenominator: x={x!r}")
    best = 0.0
    for wk, vk in zip(w, v):
        r = wk / dmax
        term = min(vk, r) if spec.family == "maxmin" else vk * r
        if term > best:
            best = term
    return best


# ---------------------------------------------------------------------------
# CSV round trip for node data


def node_data_to_csv(data: NodeData) -> str:
    """Serialize node data as ``k,value`` rows (17 significant digits)."""
    buf = io.StringIO()
    buf.write("k,value\n")
    for k, v in zip(data.ks, data.values):
        buf.write(f"{k},{v:.17g}\n")
    return buf.getvalue()


def node_data_from_csv(text: str) -> NodeData:
    """Parse :func:`node_data_to_csv` output back into node data."""
    lines = [ln for ln in text.strip().splitlines() if ln]
    if lines and lines[0].lower().startswith("k,"):
        lines = lines[1:]
    if not lines:
        raise ValueError("no node rows in CSV")
    ks, vs = [], []
    for i, ln in enumerate(lines):
        parts = ln.split(",")
        try:
            ks.append(int(parts[0]))
            vs.append(float(parts[1]))
        except (IndexError, ValueError) as exc:
            raise ValueError(f"bad node row {i}: {ln!r}") from exc
    if ks != list(range(ks[0], ks[0] + len(ks))):
        raise ValueError("node indices must be consecutive")
    return NodeData(ks[0], ks[-1], np.array(vs))
