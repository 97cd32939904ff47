"""Random folding maps x -> |theta - x| and exact interval images.

The chain folds the half-line at a random point theta drawn from a finite
distribution: one step sends x to |theta - x|. Forward iteration composes new
maps on the outside (the actual trajectory); backward iteration composes them
on the inside, which nests the images of a starting interval and makes their
lengths monotone. Interval images are computed exactly (three branches, no
rounding beyond the subtractions themselves), so nesting and monotonicity are
asserted without tolerances elsewhere in the package.

All randomness flows through TrialPlan: trial i uses a substream seed that is
a pure integer hash of (master_seed, i), so results never depend on execution
order or worker count.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import PreconditionError

_MASK64 = (1 << 64) - 1
_GOLDEN64 = 0x9E3779B97F4A7C15


def _splitmix64(z: int) -> int:
    # standard splitmix64 finalizer; full 64-bit avalanche
    z &= _MASK64
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9 & _MASK64
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB & _MASK64
    return z ^ (z >> 31)


def substream_seed(master_seed: int, index: int) -> int:
    """Deterministic 64-bit seed for substream `index` of a master seed."""
    if index < 0:
        raise PreconditionError("substream index must be >= 0")
    return _splitmix64((master_seed + (index + 1) * _GOLDEN64) & _MASK64)


@dataclass(frozen=True)
class TrialPlan:
    """Reproducible plan for a batch of independent Monte Carlo trials."""

    master_seed: int
    trials: int
    steps: int = 0

    def __post_init__(self):
        if self.trials < 1:
            raise PreconditionError("trials must be >= 1")
        if self.steps < 0:
            raise PreconditionError("steps must be >= 0")

    def substream(self, index: int) -> np.random.Generator:
        """Generator for trial `index`; pure function of (master_seed, index)."""
        return np.random.Generator(
            np.random.PCG64(substream_seed(self.master_seed, index)))


class ThetaDist:
    """Finite-support distribution of the fold point theta.

    Support points are strictly positive and distinct; weights are positive
    and sum to 1 within 1e-12. Stored sorted by support value.
    """

    def __init__(self, support: Iterable[float], weights: Iterable[float]):
        sup = np.asarray(list(support), dtype=float)
        wts = np.asarray(list(weights), dtype=float)
        if sup.size == 0 or sup.size != wts.size:
            raise PreconditionError("support and weights must be nonempty and equal-length")
        if np.any(sup <= 0):
            raise PreconditionError("fold points must be strictly positive")
        if np.any(wts <= 0):
            raise PreconditionError("weights must be strictly positive")
        if abs(wts.sum() - 1.0) > 1e-12:
            raise PreconditionError("weights must sum to 1 within 1e-12")
        order = np.argsort(sup)
        sup, wts = sup[order], wts[order]
        if np.any(np.diff(sup) == 0):
            raise PreconditionError("fold points must be distinct")
        self.support = sup
        self.weights = wts
        self.support.flags.writeable = False
        self.weights.flags.writeable = False
        # cumulative weights for inverse-transform draws; pin the top to 1.0
        cum = np.cumsum(wts)
        cum[-1] = 1.0
        self._cum = cum
        self._cum.flags.writeable = False

    @property
    def bound(self) -> float:
        """b = max of the support; one step lands the chain in [0, b]."""
        return float(self.support[-1])

    @property
    def mean(self) -> float:
        return float(self.support @ self.weights)

    @property
    def is_two_point(self) -> bool:
        """True for the canonical uniform two-point support {alpha, 1}."""
        return (self.support.size == 2
                and self.support[-1] == 1.0
                and 0.0 < self.support[0] < 1.0
                and abs(self.weights[0] - 0.5) <= 1e-12)

    @classmethod
    def two_point(cls, alpha: float) -> "ThetaDist":
        if not 0.0 < alpha < 1.0:
            raise PreconditionError("two-point alpha must lie in (0, 1)")
        return cls([alpha, 1.0], [0.5, 0.5])

    @classmethod
    def uniform(cls, support: Iterable[float]) -> "ThetaDist":
        pts = list(support)
        return cls(pts, [1.0 / len(pts)] * len(pts))

    def __repr__(self):
        return f"ThetaDist(support={self.support.tolist()}, weights={self.weights.tolist()})"


@dataclass(frozen=True)
class Interval:
    """Closed interval [lo, hi] with lo <= hi."""

    lo: float
    hi: float

    def __post_init__(self):
        if not self.lo <= self.hi:
            raise PreconditionError(f"invalid interval [{self.lo}, {self.hi}]")

    @property
    def length(self) -> float:
        return self.hi - self.lo

    def contains(self, other: "Interval") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi


def step(theta: float, x: float) -> float:
    """One fold: |theta - x|. Lipschitz-1 in x."""
    if theta < 0 or x < 0:
        raise PreconditionError("step requires theta >= 0 and x >= 0")
    return abs(theta - x)


def theta_from_uniform(dist: ThetaDist, u):
    """Map uniform [0,1) draws to support points with the declared weights."""
    idx = np.searchsorted(dist._cum, u, side="right")
    return dist.support[idx]


def sample_theta(dist: ThetaDist, rng: np.random.Generator, size=None):
    """Draw fold points; scalar when size is None, ndarray otherwise."""
    if size is None:
        return float(theta_from_uniform(dist, rng.random()))
    return theta_from_uniform(dist, rng.random(size))


def iterate_forward(word: Sequence[float], x0: float) -> np.ndarray:
    """Trajectory of x0 under the word, newest map applied last.

    Returns an array of length len(word)+1 whose entry k is the k-step
    forward iterate; entry 0 is x0.
    """
    if x0 < 0:
        raise PreconditionError("x0 must be >= 0")
    out = np.empty(len(word) + 1)
    out[0] = x = float(x0)
    for k, t in enumerate(word, start=1):
        x = abs(t - x)
        out[k] = x
    return out


def fold_backward(word: Sequence[float], x: float) -> float:
    """Apply the word with the first letter outermost (newest map innermost).

    Equals the last entry of iterate_forward(reversed(word), x).
    """
    if x < 0:
        raise PreconditionError("x must be >= 0")
    y = float(x)
    for t in reversed(list(word)):
        y = abs(t - y)
    return y


def fold_interval_arrays(theta, lo, hi):
    """Exact image endpoints of [lo, hi] under x -> |theta - x|, vectorized.

    theta may be scalar or an array broadcastable against lo/hi. A theta
    exactly equal to an endpoint takes the non-folding branch.
    """
    theta = np.asarray(theta, dtype=float)
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    below = theta <= lo          # pure translation downward
    above = theta >= hi          # pure reflection
    new_lo = np.where(below, lo - theta, np.where(above, theta - hi, 0.0))
    new_hi = np.where(below, hi - theta,
                      np.where(above, theta - lo,
                               np.maximum(theta - lo, hi - theta)))
    return new_lo, new_hi


def interval_image(theta: float, iv: Interval) -> Interval:
    """Exact image of an interval under one fold. Length never increases."""
    if theta < 0:
        raise PreconditionError("theta must be >= 0")
    lo, hi = fold_interval_arrays(theta, iv.lo, iv.hi)
    return Interval(float(lo), float(hi))


def interval_fold(word: Sequence[float], iv: Interval,
                  direction: str = "forward") -> list[Interval]:
    """Prefix images of an interval under the word, in the chosen order.

    forward: entry k is the image under the first k letters, newest outermost
    (the trajectory order). backward: entry k is the image under the first k
    letters with the first letter outermost, so the entries are nested
    whenever the one-step images stay inside the starting interval. Entry 0
    is the input interval; lengths are nonincreasing in k either way.
    """
    letters = np.asarray(list(word), dtype=float)
    n = letters.size
    if direction == "forward":
        out = [iv]
        lo, hi = iv.lo, iv.hi
        for t in letters.tolist():  # scalar branches; cheaper than ndarray ops
            if t <= lo:
                lo, hi = lo - t, hi - t
            elif t >= hi:
                lo, hi = t - hi, t - lo
            else:
                lo, hi = 0.0, max(t - lo, hi - t)
            out.append(Interval(lo, hi))
        return out
    if direction != "backward":
        raise PreconditionError("direction must be 'forward' or 'backward'")
    # entry k needs letter k applied innermost of letters 1..k, so sweep the
    # letters from last to first, folding each into every longer prefix slot
    los = np.full(n + 1, iv.lo)
    his = np.full(n + 1, iv.hi)
    for j in range(n, 0, -1):
        los[j:], his[j:] = fold_interval_arrays(letters[j - 1], los[j:], his[j:])
    return [Interval(float(a), float(b)) for a, b in zip(los, his)]
