"""Cell averages n * integral of f over [k/n, (k+1)/n] for Kantorovich nodes.

Three sources of Kantorovich information:

* exact piecewise integration for analytic piecewise-constant test functions,
* refined Riemann / trapezoid sums over sub-samples of a sampled signal,
* the pairwise mean of two consecutive samples (the half-rate shortcut used
  for ECG traces, where the operator order is half the sample count).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .operators import Domain, NodeData, node_bounds
from .signals import PiecewiseConstant, Signal

RULE_KINDS = ("exact", "riemann", "trapezoid", "pairmean")


class SignalTooCoarseError(ValueError):
    """The signal has fewer samples than the requested sub-samples per cell."""


@dataclass(frozen=True)
class QuadratureRule:
    """Cell-averaging rule; ``refinement`` is sub-samples per cell."""

    kind: str
    refinement: int = 16

    def __post_init__(self) -> None:
        if self.kind not in RULE_KINDS:
            raise ValueError(f"rule kind must be one of {RULE_KINDS}, got {self.kind!r}")
        if self.refinement < 1:
            raise ValueError(f"refinement must be >= 1, got {self.refinement}")


def cell_averages_exact(f: PiecewiseConstant, domain: Domain, n: int) -> NodeData:
    """Exact cell averages of a piecewise-constant function.

    Each average is the breakpoint-overlap sum
    sum_i |piece_i intersect cell| * value_i / |cell|, so no quadrature error
    enters; only the final rounding of each closed-form sum remains.
    """
    k_lo, k_hi = node_bounds("kantorovich", n, domain)
    edges = np.array((domain.a, *f.breakpoints, domain.b))
    vals = np.array(f.values)
    out = np.empty(k_hi - k_lo + 1)
    for i, k in enumerate(range(k_lo, k_hi + 1)):
        lo, hi = k / n, (k + 1) / n
        o_lo = np.maximum(lo, edges[:-1])
        o_hi = np.minimum(hi, edges[1:])
        overlap = np.clip(o_hi - o_lo, 0.0, None)
        out[i] = (overlap * vals).sum() / (hi - lo)
    return NodeData(k_lo, k_hi, np.clip(out, 0.0, 1.0))


def cell_averages_sampled(s: Signal, n: int, rule: QuadratureRule) -> NodeData:
    """Approximate cell averages of a sampled signal.

    ``riemann`` averages the signal at the ``refinement`` left sub-cell
    endpoints of each cell; ``trapezoid`` applies the composite trapezoid
    rule over the same sub-division; ``pairmean`` averages the two
    consecutive samples covering each cell and requires exactly two samples
    per cell.  Sub-sampling uses nearest-sample lookup, never interpolation.
    """
    if rule.kind == "exact":
        raise ValueError("the exact rule needs an analytic piecewise function")
    if s.samples.min() < 0.0 or s.samples.max() > 1.0:
        raise ValueError("signal values must lie in [0, 1]; normalize_to_unit first")
    k_lo, k_hi = node_bounds("kantorovich", n, s.domain)
    ks = np.arange(k_lo, k_hi + 1)
    n_cells = len(ks)

    if rule.kind == "pairmean":
        if len(s) != 2 * n_cells:
            raise ValueError(
                f"pairwise-mean needs exactly 2 samples per cell "
                f"({2 * n_cells}), signal has {len(s)}"
            )
        pairs = s.samples.reshape(n_cells, 2)
        return NodeData(k_lo, k_hi, pairs.mean(axis=1))

    r = rule.refinement
    if len(s) < n_cells * r:
        raise SignalTooCoarseError(
            f"SignalTooCoarse: {len(s)} samples cannot supply {r} sub-samples "
            f"for each of {n_cells} cells"
        )
    if rule.kind == "riemann":
        sub = ks[:, None] / n + np.arange(r)[None, :] / (n * r)
        out = s(sub.ravel()).reshape(n_cells, r).mean(axis=1)
    else:  # trapezoid over the r+1 sub-cell edges
        sub = ks[:, None] / n + np.arange(r + 1)[None, :] / (n * r)
        vals = s(sub.ravel()).reshape(n_cells, r + 1)
        weights = np.full(r + 1, 1.0 / r)
        weights[0] = weights[-1] = 0.5 / r
        out = vals @ weights
    return NodeData(k_lo, k_hi, np.clip(out, 0.0, 1.0))
