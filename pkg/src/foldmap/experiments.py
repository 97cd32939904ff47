"""Monte Carlo and exact experiments on the folding chain.

Reproducibility contract: every stochastic experiment takes a TrialPlan (or a
master seed) and derives one RNG substream per trial via an integer hash, so
reports are byte-identical across reruns and across worker counts. Workers
are threads; numpy does the heavy lifting, and all aggregation is ordered by
trial index, never by completion order. Runtime measurements are carried on
report objects but excluded from their canonical serializations.

Sample-indexed experiments (one_step_invariance_report) use one substream per
fixed-size chunk of samples instead of per trial; the chunk size is a module
constant, not derived from the worker count.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .contfrac import contfrac_expand, convergents
from .errors import PreconditionError, StructuralError, WindowError
from .orbit import (OrbitLabel, RHO_INVALID, W_MAX, apply_theta_label,
                    build_graph_window, rho_chart)
from .process import (ThetaDist, TrialPlan, fold_interval_arrays,
                      theta_from_uniform)
from .serialize import canonical_json, rows_to_csv
from .stationary import PiecewiseLinearCDF, sample_stationary, stationary_cdf

_SAMPLE_CHUNK = 1 << 16   # substream granularity for sample-indexed runs
_TRIAL_BLOCK = 1 << 12    # trials vectorized together (does not affect output)
_RATE_QK_CAP = 99         # keeps N below ~5.2e7 letters per trial


class EmpiricalCDF:
    """Right-continuous step CDF of a finite sample."""

    def __init__(self, values):
        arr = np.sort(np.asarray(values, dtype=float).ravel())
        if arr.size == 0:
            raise PreconditionError("empirical CDF needs a nonempty sample")
        self.values = arr
        self.values.flags.writeable = False

    @property
    def size(self) -> int:
        return self.values.size

    def evaluate(self, x):
        return np.searchsorted(self.values, x, side="right") / self.size

    __call__ = evaluate


def ks_distance(sample: EmpiricalCDF, reference) -> float:
    """Exact sup-distance between an empirical CDF and a reference CDF.

    reference may be a PiecewiseLinearCDF (one-sample statistic, evaluated at
    the jump points) or another EmpiricalCDF (two-sample, evaluated at the
    merged jump points).
    """
    xs = sample.values
    n = sample.size
    if isinstance(reference, PiecewiseLinearCDF):
        f = reference.evaluate(xs)
        i = np.arange(1, n + 1)
        return float(max(np.max(i / n - f), np.max(f - (i - 1) / n)))
    if isinstance(reference, EmpiricalCDF):
        grid = np.concatenate([xs, reference.values])
        return float(np.max(np.abs(sample.evaluate(grid) - reference.evaluate(grid))))
    raise PreconditionError(f"unsupported reference type {type(reference).__name__}")


# ---- trial-blocked Monte Carlo helpers ------------------------------------


def _trial_uniform_matrix(plan: TrialPlan, first: int, count: int,
                          draws: int) -> np.ndarray:
    """(count, draws) uniforms; row i comes from substream first+i."""
    out = np.empty((count, draws))
    for i in range(count):
        out[i] = plan.substream(first + i).random(draws)
    return out


def _run_blocks(worker, n_items: int, block: int, workers: int) -> list:
    """Apply worker(start, count) over fixed blocks; results in block order."""
    starts = list(range(0, n_items, block))
    tasks = [(s, min(block, n_items - s)) for s in starts]
    if workers <= 1:
        return [worker(s, c) for s, c in tasks]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda t: worker(*t), tasks))


def forward_values(dist: ThetaDist, x0: float, n: int, plan: TrialPlan,
                   workers: int = 1) -> np.ndarray:
    """n-th forward iterate per trial, in trial order.

    Trial t folds x0 through n letters drawn from substream t.
    """
    if x0 < 0:
        raise PreconditionError("x0 must be >= 0")
    if n < 0:
        raise PreconditionError("n must be >= 0")

    def worker(start, count):
        if n == 0:
            return np.full(count, float(x0))
        u = _trial_uniform_matrix(plan, start, count, n)
        x = np.full(count, float(x0))
        for j in range(n):
            x = np.abs(theta_from_uniform(dist, u[:, j]) - x)
        return x

    parts = _run_blocks(worker, plan.trials, _TRIAL_BLOCK, workers)
    return np.concatenate(parts)


def ensemble_forward(dist: ThetaDist, x0: float, n: int, plan: TrialPlan,
                     workers: int = 1) -> EmpiricalCDF:
    """Empirical law of the n-th forward iterate over plan.trials trajectories."""
    return EmpiricalCDF(forward_values(dist, x0, n, plan, workers=workers))


def backward_diam_ensemble(dist: ThetaDist, n: int, plan: TrialPlan,
                           workers: int = 1) -> np.ndarray:
    """Exact lengths of the backward image of [0, b] after n letters per trial.

    Trial t's word comes from substream t, drawn left to right, so the word
    for a smaller n is a prefix of the word for a larger n under the same
    plan and the returned lengths are pointwise nonincreasing in n.
    """
    if n < 0:
        raise PreconditionError("n must be >= 0")
    b = dist.bound

    def worker(start, count):
        if n == 0:
            return np.full(count, b)
        u = _trial_uniform_matrix(plan, start, count, n)
        lo = np.zeros(count)
        hi = np.full(count, b)
        for j in range(n - 1, -1, -1):  # newest letter innermost
            lo, hi = fold_interval_arrays(theta_from_uniform(dist, u[:, j]), lo, hi)
        return hi - lo

    parts = _run_blocks(worker, plan.trials, _TRIAL_BLOCK, workers)
    return np.concatenate(parts)


# ---- rate experiment -------------------------------------------------------


@dataclass
class RateReport:
    """Outcome of a backward-contraction rate run at one (q_k, epsilon)."""

    alpha: float
    k_index: int
    q_k: int
    epsilon: float
    n_steps: int
    trials: int
    success_count: int
    letters_used: list
    successes: list
    implied_c: float | None
    master_seed: int
    runtime_seconds: float  # excluded from canonical serializations

    @property
    def success_fraction(self) -> float:
        return self.success_count / self.trials

    def to_dict(self) -> dict:
        return {
            "schema": 1,
            "kind": "rate_report",
            "alpha": self.alpha,
            "k_index": self.k_index,
            "q_k": self.q_k,
            "epsilon": self.epsilon,
            "n_steps": self.n_steps,
            "trials": self.trials,
            "success_count": self.success_count,
            "success_fraction": self.success_fraction,
            "letters_used": self.letters_used,
            "successes": self.successes,
            "implied_c": self.implied_c,
            "master_seed": self.master_seed,
        }

    def to_json(self) -> str:
        return canonical_json(self.to_dict())

    def to_csv(self) -> str:
        rows = zip(range(self.trials), self.successes, self.letters_used)
        return rows_to_csv(["trial", "success", "letters_used"], rows)


def rate_steps(q_k: int) -> int:
    """Letter budget ceil(8 * q_k^3 * log2(q_k)) of the rate bound."""
    return math.ceil(8 * q_k ** 3 * math.log2(q_k))


def rate_experiment(alpha: float, k_index: int, epsilon: float,
                    plan: TrialPlan, workers: int = 1) -> RateReport:
    """Monte Carlo check of the backward-contraction rate bound.

    Uses the two-point distribution {alpha, 1}. k_index selects the
    convergent denominator q_k of alpha; each trial folds [0, 1] backward
    through N = ceil(8 q_k^3 log2 q_k) letters from its own substream and
    succeeds when the exact final diameter is below epsilon. Because the
    diameter is nonincreasing while the word is consumed innermost-first,
    each trial stops at the first sub-epsilon diameter; letters_used records
    that stopping point (or N on failure).
    """
    qs = convergents(contfrac_expand(alpha, 40))
    if not 0 <= k_index < len(qs):
        raise PreconditionError(f"k_index {k_index} out of range for this alpha")
    q_k = qs[k_index].q
    if q_k < 2:
        raise PreconditionError("q_k must be >= 2 (log2 q_k must be positive)")
    if q_k > _RATE_QK_CAP:
        raise PreconditionError(f"q_k > {_RATE_QK_CAP} is beyond the desk-scale cap")
    if epsilon <= 8.0 / q_k:
        raise PreconditionError(f"epsilon must exceed 8/q_k = {8.0 / q_k}")
    n_steps = rate_steps(q_k)
    t0 = time.perf_counter()

    def worker(start, count):
        rows = []
        for t in range(start, start + count):
            u = plan.substream(t).random(n_steps)
            lo, hi = 0.0, 1.0
            used = n_steps
            success = False
            applied = 0
            for uu in u[::-1]:
                if hi - lo < epsilon:
                    success, used = True, applied
                    break
                theta = alpha if uu < 0.5 else 1.0
                if theta <= lo:
                    lo, hi = lo - theta, hi - theta
                elif theta >= hi:
                    lo, hi = theta - hi, theta - lo
                else:
                    lo, hi = 0.0, max(theta - lo, hi - theta)
                applied += 1
            else:
                if hi - lo < epsilon:
                    success, used = True, applied
            rows.append((success, used))
        return rows

    parts = _run_blocks(worker, plan.trials, _TRIAL_BLOCK, workers)
    flat = [row for part in parts for row in part]
    successes = [bool(s) for s, _ in flat]
    letters = [int(k) for _, k in flat]
    success_count = sum(successes)
    failures = plan.trials - success_count
    implied_c = (-epsilon * math.log(failures / plan.trials)) if failures else None
    return RateReport(alpha=alpha, k_index=k_index, q_k=q_k, epsilon=epsilon,
                      n_steps=n_steps, trials=plan.trials,
                      success_count=success_count, letters_used=letters,
                      successes=successes, implied_c=implied_c,
                      master_seed=plan.master_seed,
                      runtime_seconds=time.perf_counter() - t0)


# ---- exact walk oracle -----------------------------------------------------


def walk_confinement_dp(n: int, exact: bool = True):
    """Probability that a +-1 walk of length n^3 stays within n of its start.

    Transfer-matrix DP over the 2n+1 positions -n..n with exact integer path
    counts; the result is count / 2^(n^3), returned as a Fraction when exact
    else as a float. Confinement is inclusive: |S_i| <= n.
    """
    if not 1 <= n <= 30:
        raise PreconditionError("n must lie in 1..30")
    horizon = n ** 3
    width = 2 * n + 1
    counts = [0] * width
    counts[n] = 1  # origin
    for _ in range(horizon):
        nxt = [0] * width
        for i, c in enumerate(counts):
            if not c:
                continue
            if i > 0:
                nxt[i - 1] += c
            if i < width - 1:
                nxt[i + 1] += c
        counts = nxt
    p = Fraction(sum(counts), 2 ** horizon)
    return p if exact else float(p)


# ---- rho walk audit --------------------------------------------------------


def rho_walk_audit(alpha: float, x0: float, steps: int, plan: TrialPlan,
                   q_values=(7, 17), segments: int = 1000,
                   window: int | None = None) -> dict:
    """Simulate a theta-walk on orbit labels and audit its rho coordinate.

    Reports the fraction of +1 rho increments (the walk is a simple +-1 walk,
    so the fraction should be near 1/2) and, for each q in q_values, checks
    sampled point pairs whose rho separation is at least 2q: some graph
    vertex at a strictly intermediate rho level must have value below
    3/(2q). Violations are counted; the underlying claim guarantees zero.

    The label path is simulated first; when window is None the graph is built
    just large enough to contain it. A caller-provided window that the path
    escapes raises WindowError.
    """
    if not 0.0 < x0 < min(alpha, 1.0 - alpha):
        raise PreconditionError("x0 must satisfy 0 < x0 < min(alpha, 1-alpha)")
    if steps < 0:
        raise PreconditionError("steps must be >= 0")
    base = {"schema": 1, "kind": "rho_walk_audit", "alpha": alpha, "x0": x0,
            "steps": steps, "master_seed": plan.master_seed}
    if steps == 0:
        return {**base, "plus_fraction": None, "window": 0, "rho_range": [0, 0],
                "farsmall": [], "farsmall_violations": 0, "segments_checked": 0}

    u = plan.substream(0).random(steps)
    ns = np.empty(steps + 1, dtype=np.int64)
    eps = np.empty(steps + 1, dtype=np.int64)
    label = OrbitLabel(0, 1)
    ns[0], eps[0] = label.n, label.eps
    for k in range(steps):
        theta = alpha if u[k] < 0.5 else 1.0
        label = apply_theta_label(alpha, x0, label, theta)
        if abs(label.n) > W_MAX:
            raise WindowError(f"walk reached |n| = {abs(label.n)} > {W_MAX}")
        ns[k + 1], eps[k + 1] = label.n, label.eps

    reach = int(np.max(np.abs(ns)))
    if window is None:
        window = reach + 4
    elif reach > window:
        raise WindowError(f"walk reached |n| = {reach} > window {window}; enlarge")
    graph = build_graph_window(alpha, x0, window)
    chart = rho_chart(graph, OrbitLabel(0, 1))

    m = 2 * window + 1
    flat = np.where(eps == 1, 0, 1) * m + (ns + window)
    rho_path = chart.rho[flat]
    if np.any(rho_path == RHO_INVALID):
        raise StructuralError("walk visited a vertex outside the chart domain")
    increments = np.diff(rho_path)
    if np.any(np.abs(increments) != 1):
        raise StructuralError("rho increment with |step| != 1; chart is inconsistent")
    plus_fraction = float(np.mean(increments == 1))

    # dense per-level minimum vertex values across the whole chart
    lo_level = min(chart.level_min_value)
    hi_level = max(chart.level_min_value)
    level_min = np.full(hi_level - lo_level + 1, np.inf)
    for lev, v in chart.level_min_value.items():
        level_min[lev - lo_level] = v

    rng = plan.substream(1)
    i_idx = rng.integers(0, steps + 1, size=segments)
    j_idx = rng.integers(0, steps + 1, size=segments)
    farsmall = []
    total_violations = 0
    checked_total = 0
    for q in q_values:
        bound = 3.0 / (2.0 * q)
        need = 2 * q
        checked = violations = 0
        for i, j in zip(i_idx, j_idx):
            a, b = sorted((int(rho_path[i]), int(rho_path[j])))
            if b - a < need:
                continue
            checked += 1
            inner = level_min[a + 1 - lo_level: b - lo_level]
            if not np.any(inner < bound):
                violations += 1
        farsmall.append({"q": int(q), "bound": bound,
                         "segments_checked": checked, "violations": violations})
        total_violations += violations
        checked_total += checked
    return {**base, "plus_fraction": plus_fraction, "window": int(window),
            "rho_range": [int(rho_path.min()), int(rho_path.max())],
            "farsmall": farsmall, "farsmall_violations": total_violations,
            "segments_checked": checked_total}


# ---- distribution-level reports -------------------------------------------


def one_step_invariance_report(dist: ThetaDist, n_samples: int,
                               master_seed: int, workers: int = 1) -> dict:
    """Draw stationary samples, apply one random fold, measure KS to the law.

    Sample-indexed: chunk c of 2^16 samples uses substreams (2c, 2c+1) for
    the stationary draw and the fold letter, so output is independent of
    worker count.
    """
    if n_samples < 1:
        raise PreconditionError("n_samples must be >= 1")
    cdf = stationary_cdf(dist)
    plan = TrialPlan(master_seed, trials=1)

    def worker(start, count):
        chunk = start // _SAMPLE_CHUNK
        x = sample_stationary(cdf, plan.substream(2 * chunk), count)
        theta = theta_from_uniform(dist, plan.substream(2 * chunk + 1).random(count))
        return np.abs(theta - x)

    parts = _run_blocks(worker, n_samples, _SAMPLE_CHUNK, workers)
    stepped = EmpiricalCDF(np.concatenate(parts))
    return {"schema": 1, "kind": "one_step_invariance", "n_samples": n_samples,
            "master_seed": master_seed,
            "support": dist.support.tolist(), "weights": dist.weights.tolist(),
            "ks_distance": ks_distance(stepped, cdf)}


def law_equality_report(dist: ThetaDist, x0: float, n: int, trials: int,
                        master_seed: int, workers: int = 1) -> dict:
    """Two-sample KS between forward and backward n-step values at x0.

    Forward trial t uses substream t; backward trial t uses substream
    trials + t, so the two ensembles are independent.
    """
    if n < 0 or trials < 1:
        raise PreconditionError("need n >= 0 and trials >= 1")
    plan = TrialPlan(master_seed, trials)

    def fold_block(start, count, offset, reverse):
        if n == 0:
            return np.full(count, float(x0))
        u = _trial_uniform_matrix(plan, offset + start, count, n)
        x = np.full(count, float(x0))
        cols = range(n - 1, -1, -1) if reverse else range(n)
        for j in cols:
            x = np.abs(theta_from_uniform(dist, u[:, j]) - x)
        return x

    fwd = _run_blocks(lambda s, c: fold_block(s, c, 0, False),
                      trials, _TRIAL_BLOCK, workers)
    bwd = _run_blocks(lambda s, c: fold_block(s, c, trials, True),
                      trials, _TRIAL_BLOCK, workers)
    ks = ks_distance(EmpiricalCDF(np.concatenate(fwd)),
                     EmpiricalCDF(np.concatenate(bwd)))
    return {"schema": 1, "kind": "law_equality", "x0": x0, "n": n,
            "trials": trials, "master_seed": master_seed, "ks_distance": ks}
