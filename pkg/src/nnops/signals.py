"""Test functions, sampled signals, noise injection, and CSV ingestion.

The operators expect functions with values in [0, 1]; raw traces (for
instance ECG excerpts in millivolts) are brought into range by the affine
map of :func:`normalize_to_unit`, which records (offset, gain) so results
can be mapped back.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass

import numpy as np

from .operators import Domain


class DegenerateRangeError(ValueError):
    """All samples equal; the affine normalization to [0, 1] is undefined."""


class SignalParseError(ValueError):
    """A CSV cell could not be parsed; the message names row and column."""


class TooFewSamplesError(ValueError):
    """A signal needs at least two samples."""


@dataclass(frozen=True)
class PiecewiseConstant:
    """Piecewise constant function: value i on the i-th piece.

    Pieces follow the left-closed-first convention: the first piece is
    [a, b_1] and every later piece is (b_i, b_{i+1}], so the value at a
    breakpoint belongs to the piece on its left.
    """

    domain: Domain
    breakpoints: tuple[float, ...]
    values: tuple[float, ...]

    def __post_init__(self) -> None:
        bps = tuple(float(b) for b in self.breakpoints)
        vals = tuple(float(v) for v in self.values)
        object.__setattr__(self, "breakpoints", bps)
        object.__setattr__(self, "values", vals)
        if len(vals) != len(bps) + 1:
            raise ValueError("need exactly one value per piece")
        if any(v < 0.0 or v > 1.0 for v in vals):
            raise ValueError("piece values must lie in [0, 1]")
        if any(b2 <= b1 for b1, b2 in zip(bps, bps[1:])):
            raise ValueError("breakpoints must be strictly increasing")
        if bps and not (self.domain.a < bps[0] and bps[-1] < self.domain.b):
            raise ValueError("breakpoints must be interior to the domain")

    def __call__(self, x):
        xa = np.asarray(x, dtype=float)
        idx = np.searchsorted(np.array(self.breakpoints), xa, side="left")
        out = np.array(self.values)[idx]
        return float(out) if np.ndim(x) == 0 else out

    def to_json(self) -> str:
        return json.dumps(
            {
                "domain": [self.domain.a, self.domain.b],
                "breakpoints": list(self.breakpoints),
                "values": list(self.values),
            }
        )

    @staticmethod
    def from_json(text: str) -> "PiecewiseConstant":
        d = json.loads(text)
        return PiecewiseConstant(
            Domain(*d["domain"]), tuple(d["breakpoints"]), tuple(d["values"])
        )


def step_test_function() -> PiecewiseConstant:
    """The discontinuous four-level step function on [0, 1] used throughout
    the experiments: 0.2, 0.9, 0.3, 0.6 with jumps at 0.2, 0.5, 0.8."""
    return PiecewiseConstant(Domain(0.0, 1.0), (0.2, 0.5, 0.8), (0.2, 0.9, 0.3, 0.6))


@dataclass(frozen=True)
class Signal:
    """Uniformly sampled trace over a closed domain, endpoints inclusive.

    ``normalization`` is the (offset, gain) pair recorded by
    :func:`normalize_to_unit`; original values are offset + gain * sample.
    Calling the signal performs nearest-sample lookup (no interpolation).
    """

    domain: Domain
    samples: np.ndarray
    normalization: tuple[float, float] | None = None

    def __post_init__(self) -> None:
        samples = np.asarray(self.samples, dtype=float).copy()
        samples.setflags(write=False)
        object.__setattr__(self, "samples", samples)
        if samples.ndim != 1 or len(samples) < 2:
            raise TooFewSamplesError("a signal needs at least 2 samples")

    def __len__(self) -> int:
        return len(self.samples)

    @property
    def grid(self) -> np.ndarray:
        return np.linspace(self.domain.a, self.domain.b, len(self.samples))

    def __call__(self, x):
        d = self.domain
        pos = (np.asarray(x, dtype=float) - d.a) / d.width * (len(self.samples) - 1)
        idx = np.clip(np.rint(pos).astype(int), 0, len(self.samples) - 1)
        out = self.samples[idx]
        return float(out) if np.ndim(x) == 0 else out


def add_gaussian_noise(s: Signal, sigma: float, seed: int) -> Signal:
    """Add independent N(0, sigma^2) noise to every sample, clipped to [0, 1].

    The generator is numpy's PCG64 (``np.random.default_rng``), so the output
    is fully determined by (seed, sigma).  Clipping keeps the noisy signal a
    valid operator input; for sigma around 0.05 it touches only the samples
    already near 0 or 1.
    """
    if sigma < 0.0:
        raise ValueError(f"sigma must be >= 0, got {sigma}")
    if sigma == 0.0:
        return Signal(s.domain, s.samples, s.normalization)
    rng = np.random.default_rng(seed)
    noisy = s.samples + sigma * rng.standard_normal(len(s.samples))
    return Signal(s.domain, np.clip(noisy, 0.0, 1.0), s.normalization)


def normalize_to_unit(s: Signal) -> Signal:
    """Affinely map the sample range onto [0, 1], recording (offset, gain)."""
    lo = float(s.samples.min())
    hi = float(s.samples.max())
    if hi == lo:
        raise DegenerateRangeError("all samples equal; cannot normalize")
    return Signal(s.domain, (s.samples - lo) / (hi - lo), normalization=(lo, hi - lo))


def denormalize(s: Signal) -> Signal:
    """Invert :func:`normalize_to_unit` using the recorded (offset, gain)."""
    if s.normalization is None:
        raise ValueError("signal carries no normalization record")
    offset, gain = s.normalization
    return Signal(s.domain, offset + gain * s.samples, normalization=None)


def load_signal_csv(path, column=0, domain: Domain = Domain(0.0, 1.0)) -> Signal:
    """Load a uniformly sampled signal from a CSV file.

    ``column`` selects the value column by integer index or, when the file
    has a header row, by name.  Rows are taken in file order and placed on a
    uniform grid over ``domain``; no resampling is performed.
    """
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    rows = [r for r in rows if r and any(cell.strip() for cell in r)]
    if not rows:
        raise TooFewSamplesError(f"{path}: empty file")

    def _is_number(cell: str) -> bool:
        try:
            float(cell)
            return True
        except ValueError:
            return False

    header = None
    if not all(_is_number(c) for c in rows[0]):
        header = rows[0]
        rows = rows[1:]

    if isinstance(column, str):
        if header is None or column not in header:
            raise SignalParseError(f"{path}: no column named {column!r}")
        col = header.index(column)
    else:
        col = column

    values = []
    for i, row in enumerate(rows):
        if col >= len(row):
            raise SignalParseError(f"{path}: row {i} has no column {col}")
        try:
            values.append(float(row[col]))
        except ValueError:
            raise SignalParseError(
                f"{path}: row {i}, column {col}: cannot parse {row[col]!r}"
            ) from None
    if len(values) < 2:
        raise TooFewSamplesError(f"{path}: need at least 2 rows, got {len(values)}")
    return Signal(domain, np.array(values))


def write_signal_csv(s: Signal, path) -> None:
    """Write ``x,value`` rows with 17 significant digits."""
    with open(path, "w", newline="") as fh:
        fh.write(signal_to_csv(s))


def signal_to_csv(s: Signal) -> str:
    buf = io.StringIO()
    buf.write("x,value\n")
    for x, v in zip(s.grid, s.samples):
        buf.write(f"{x:.17g},{v:.17g}\n")
    return buf.getvalue()


def sample_function(f, domain: Domain, num_samples: int) -> Signal:
    """Sample a callable on the inclusive uniform grid of ``num_samples``."""
    if num_samples < 2:
        raise TooFewSamplesError("need at least 2 samples")
    xs = np.linspace(domain.a, domain.b, num_samples)
    return Signal(domain, np.asarray(f(xs), dtype=float))


def synthetic_ecg(num_samples: int = 1600, beats: int = 5) -> Signal:
    """Deterministic ECG-like trace: per beat a tall narrow R spike, small
    Q/S dips, and broader P and T bumps, all Gaussian, on a flat baseline.

    Values stay inside [0, 1]; the real thing (for instance record 101 of a
    public arrhythmia database) can be loaded with :func:`load_signal_csv`
    after export to CSV.
    """
    if beats < 1:
        raise ValueError("need at least one beat")
    xs = np.linspace(0.0, 1.0, num_samples)
    period = 1.0 / beats
    # (amplitude, center offset within the beat, width), in beat periods
    waves = (
        (0.07, -0.22, 0.045),  # P
        (-0.05, -0.06, 0.012),  # Q
        (0.52, 0.0, 0.016),  # R
        (-0.08, 0.06, 0.014),  # S
        (0.13, 0.26, 0.07),  # T
    )
    out = np.full(num_samples, 0.32)
    for i in range(beats):
        center = (i + 0.5) * period
        for amp, off, width in waves:
            mu = center + off * period
            w = width * period
            out += amp * np.exp(-0.5 * ((xs - mu) / w) ** 2)
    return Signal(Domain(0.0, 1.0), np.clip(out, 0.0, 1.0))


def holder_test_function(beta: float, domain: Domain = Domain(0.0, 1.0)):
    """The function ((x - a)/(b - a))^beta, Hoelder continuous of order beta
    on the domain (Lipschitz for beta = 1), with values exactly in [0, 1]."""
    if not 0.0 < beta <= 1.0:
        raise ValueError(f"beta must be in (0, 1], got {beta}")

    def f(x):
        t = (np.asarray(x, dtype=float) - domain.a) / domain.width
        out = np.clip(t, 0.0, 1.0) ** beta
        return float(out) if np.ndim(x) == 0 else out

    return f
