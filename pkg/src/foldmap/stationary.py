"""Stationary law of the folding chain and the value it forces at alpha.

For a finite fold-point distribution the stationary CDF is piecewise linear:
its slope at y is Pr{theta > y} divided by the mean of theta, so breakpoints
sit at 0 and at the support points. For the uniform two-point support
{alpha, 1} this gives 2x/(1+alpha) below alpha and (x+alpha)/(1+alpha) above,
hence CDF(alpha) = 2*alpha/(1+alpha).

The second half of the module treats that value as an unknown z and recovers
it combinatorially: along integers n whose fractional part <n*alpha> is small,
the stationary CDF at <n*alpha> is an integer-coefficient affine function of
z, and the coefficient ratio (2n-2L)/(2n-L) converges to z as <n*alpha> -> 0.
L counts the indices i <= n with <i*alpha> at or above alpha; the convention
is pinned by tests against the closed form.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import PreconditionError
from .process import ThetaDist
from .serialize import canonical_json, rows_to_csv


class PiecewiseLinearCDF:
    """Continuous piecewise-linear CDF given by breakpoints and values."""

    def __init__(self, xs, values):
        xs = np.asarray(xs, dtype=float)
        values = np.asarray(values, dtype=float)
        if xs.ndim != 1 or xs.size < 2 or xs.shape != values.shape:
            raise PreconditionError("need matching 1-d breakpoints and values, length >= 2")
        if np.any(np.diff(xs) <= 0):
            raise PreconditionError("breakpoints must be strictly increasing")
        if values[0] != 0.0 or values[-1] != 1.0 or np.any(np.diff(values) < 0):
            raise PreconditionError("values must rise from 0 to 1")
        self.xs = xs
        self.values = values
        self.xs.flags.writeable = False
        self.values.flags.writeable = False

    def evaluate(self, x):
        """CDF at x (scalar or array); 0 left of the first breakpoint, 1 right of the last."""
        return np.interp(x, self.xs, self.values, left=0.0, right=1.0)

    __call__ = evaluate

    def to_csv(self) -> str:
        return rows_to_csv(["x", "F"], zip(self.xs, self.values))

    def to_json(self) -> str:
        return canonical_json({"schema": 1, "kind": "piecewise_linear_cdf",
                               "breakpoints": self.xs, "values": self.values})


def stationary_cdf(dist: ThetaDist) -> PiecewiseLinearCDF:
    """Exact stationary CDF of the folding chain for a finite fold-point law."""
    xs = np.concatenate(([0.0], dist.support))
    # Pr{theta > y} is constant between support points
    tails = 1.0 - np.concatenate(([0.0], np.cumsum(dist.weights)[:-1]))
    values = np.empty_like(xs)
    values[0] = 0.0
    np.cumsum(np.diff(xs) * tails / dist.mean, out=values[1:])
    values[-1] = 1.0  # analytically exact; pin against round-off
    return PiecewiseLinearCDF(xs, values)


def stationary_quantile(cdf: PiecewiseLinearCDF, u):
    """Smallest x with CDF(x) >= u; exact on linear pieces."""
    u_arr = np.asarray(u, dtype=float)
    if np.any(u_arr < 0) or np.any(u_arr > 1):
        raise PreconditionError("quantile argument must lie in [0, 1]")
    out = np.interp(u_arr, cdf.values, cdf.xs)
    return float(out) if np.isscalar(u) or u_arr.ndim == 0 else out


def sample_stationary(cdf: PiecewiseLinearCDF, rng: np.random.Generator, size=None):
    """Inverse-CDF sampling, deterministic given the generator state."""
    return stationary_quantile(cdf, rng.random(size))


def large_count(alpha: float, n: int) -> int:
    """Number of i in 1..n with <i*alpha> at or above alpha.

    For alpha > 1/2 these are the orbit points at or above the upper class
    cut; for alpha < 1/2 the same count covers the medium and large classes
    combined. Equals n - floor(n*alpha) for irrational alpha.
    """
    if not 0 < alpha < 1:
        raise PreconditionError("alpha must lie in (0, 1)")
    if n < 1:
        raise PreconditionError("n must be >= 1")
    frac = np.arange(1, n + 1) * alpha % 1.0
    return int(np.count_nonzero(frac >= alpha))


def large_count_cumulative(alpha: float, n: int) -> np.ndarray:
    """L_1..L_n in one pass (index 0 holds L_1)."""
    if n < 1:
        raise PreconditionError("n must be >= 1")
    frac = np.arange(1, n + 1) * alpha % 1.0
    return np.cumsum(frac >= alpha)


def is_small_vertex(alpha: float, n: int, tol: float = 1e-12) -> bool:
    """True when <n*alpha> falls strictly inside the small class (below both cuts)."""
    v = n * alpha % 1.0
    return v < min(alpha, 1.0 - alpha) - tol


@dataclass(frozen=True)
class AffineInZ:
    """Integer-coefficient affine form a*z + b in the unknown z = CDF(alpha)."""

    a: int
    b: int

    def at(self, z: float) -> float:
        return self.a * z + self.b


def affine_small_vertex(alpha: float, n: int) -> AffineInZ:
    """Stationary CDF at <n*alpha>, as an affine form in z, for small <n*alpha>.

    Requires <n*alpha> to be a small vertex; the coefficients are
    (2n - L, -(2n - 2L)) with L = large_count(alpha, n).
    """
    if n < 1:
        raise PreconditionError("n must be >= 1")
    if not is_small_vertex(alpha, n):
        raise PreconditionError(f"<{n}*alpha> is not a small vertex")
    L = large_count(alpha, n)
    return AffineInZ(2 * n - L, -(2 * n - 2 * L))


def z_estimate(alpha: float, n: int) -> float:
    """Ratio (2n - 2L)/(2n - L); converges to CDF(alpha) as <n*alpha> -> 0."""
    L = large_count(alpha, n)
    return (2 * n - 2 * L) / (2 * n - L)
