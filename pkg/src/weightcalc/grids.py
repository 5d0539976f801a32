"""Grids, tail windows and the finite-window trend heuristics.

Asymptotic statements (limits, O/o relations) are undecidable from finite
data.  Every detector here is an estimator over a declared window and the
window parameters travel with the verdicts that use them.  The shared
heuristics are:

* ``decays_to_zero`` -- a sampled ratio behaves like o(1): the four
  quarter-window maxima strictly decrease and the tail has dropped by a
  window-size-aware factor (``span ** -DECAY_EXPONENT``), so a wide window
  demands a deep drop while a narrow one only a shallow drop.
* ``diverges`` -- the quarter maxima strictly increase and the last quarter
  still rises by a margin, which separates growth to infinity from
  convergence-from-below to a finite limit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0  # 1/phi
INV_PHI_SQ = (3.0 - math.sqrt(5.0)) / 2.0  # 1/phi^2

#: Decay demanded of an o(1) ratio across a window spanning ``span`` decades:
#: tail <= head * span**-DECAY_EXPONENT.
DECAY_EXPONENT = 0.15

#: Log-scale rise of the last quarter required to call a sequence divergent.
DIVERGENCE_RISE = 0.05


@dataclass(frozen=True)
class GridSpec:
    """Log-spaced evaluation grid for sup/inf transforms."""

    t_min: float = 1e-2
    t_max: float = 1e8
    n: int = 2048
    refine_iters: int = 60

    def __post_init__(self):
        if not (self.t_min > 0 and self.t_min < self.t_max):
            raise ValueError("need 0 < t_min < t_max")
        if self.n < 64:
            raise ValueError("grid needs at least 64 points")

    def log_points(self, upper=None):
        hi = self.t_max if upper is None else min(self.t_max, upper)
        if hi <= self.t_min:
            hi = self.t_min * 10.0
        return np.linspace(math.log(self.t_min), math.log(hi), self.n)

    def points(self, upper=None):
        return np.exp(self.log_points(upper))


DEFAULT_GRID = GridSpec()


@dataclass(frozen=True)
class TailWindow:
    """Sampling window [t_lo, t_hi] used for tail/limit estimators."""

    t_lo: float = 1e3
    t_hi: float = 1e7
    n: int = 512

    def __post_init__(self):
        if not (self.t_lo > 0 and self.t_lo < self.t_hi):
            raise ValueError("need 0 < t_lo < t_hi")

    def samples(self):
        return np.exp(np.linspace(math.log(self.t_lo), math.log(self.t_hi), self.n))

    @property
    def span(self):
        return self.t_hi / self.t_lo

    def clipped(self, upper, lower=None):
        """Shrink the window to respect an evaluation-domain bound.

        The log-span is preserved when the top is lowered: a tail window is
        a relative notion, so [hi/span, hi] keeps its meaning when hi moves.
        """
        hi = min(self.t_hi, upper)
        lo = self.t_lo
        if hi < self.t_hi:
            lo = hi / self.span
        if lower is not None:
            lo = max(lo, lower)
        if lo >= hi:
            lo = hi / 100.0
        return TailWindow(lo, hi, self.n)

    def as_dict(self):
        return {"t_lo": self.t_lo, "t_hi": self.t_hi, "n": self.n}


DEFAULT_TAIL = TailWindow()


def quarter_maxima(values):
    """Maxima of the four consecutive quarters of a sampled array."""
    vals = np.asarray(values, dtype=float)
    if vals.size < 8:
        raise ValueError("need at least 8 samples for quarter statistics")
    quarters = np.array_split(vals, 4)
    return np.array([q.max() for q in quarters])


def quarter_minima(values):
    vals = np.asarray(values, dtype=float)
    if vals.size < 8:
        raise ValueError("need at least 8 samples for quarter statistics")
    quarters = np.array_split(vals, 4)
    return np.array([q.min() for q in quarters])


def decays_to_zero(ratios, span):
    """Finite-window proxy for ``ratios -> 0`` over a window of given span."""
    ratios = np.asarray(ratios, dtype=float)
    qm = quarter_maxima(ratios)
    if not np.all(np.diff(qm) < 0):
        return False
    demanded = qm[0] * span ** (-DECAY_EXPONENT)
    return bool(qm[3] <= demanded)


def diverges(log_values):
    """Finite-window proxy for an (additively scaled) sequence -> +infinity."""
    vals = np.asarray(log_values, dtype=float)
    qm = quarter_maxima(vals)
    if not np.all(np.diff(qm) > 0):
        return False
    return bool(qm[3] - qm[2] > DIVERGENCE_RISE)


def golden_max(f, lo, hi, iters=60):
    """Golden-section maximisation of a unimodal ``f`` on [lo, hi].

    Returns (argmax, max).  ``f`` is scalar-valued.
    """
    a, b = (lo, hi) if lo <= hi else (hi, lo)
    h = b - a
    if h <= 0:
        return a, f(a)
    c = a + INV_PHI_SQ * h
    d = a + INV_PHI * h
    yc, yd = f(c), f(d)
    for _ in range(iters):
        if yc > yd:
            b, d, yd = d, c, yc
            h = INV_PHI * h
            c = a + INV_PHI_SQ * h
            yc = f(c)
        else:
            a, c, yc = c, d, yd
            h = INV_PHI * h
            d = a + INV_PHI * h
            yd = f(d)
    x = c if yc > yd else d
    return x, max(yc, yd)


def golden_max_vec(f, lo, hi, iters=60):
    """Vectorised golden-section maximisation.

    ``lo``/``hi`` are arrays of per-problem brackets and ``f`` maps an array
    of points to an array of values (applied elementwise).  Returns
    (argmax array, max array).  Spends two evaluations per iteration to keep
    the bracket update branch-free.
    """
    a = np.asarray(lo, dtype=float).copy()
    b = np.asarray(hi, dtype=float).copy()
    h = b - a
    c = a + INV_PHI_SQ * h
    d = a + INV_PHI * h
    yc, yd = f(c), f(d)
    for _ in range(iters):
        left = yc > yd
        b = np.where(left, d, b)
        a = np.where(left, a, c)
        h = b - a
        c = a + INV_PHI_SQ * h
        d = a + INV_PHI * h
        yc = f(c)
        yd = f(d)
    best_c = yc >= yd
    x = np.where(best_c, c, d)
    y = np.where(best_c, yc, yd)
    return x, y
