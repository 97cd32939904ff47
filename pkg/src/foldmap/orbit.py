"""Symbolic orbit labels, the orbit graph, and its coordinate structure.

Under the two maps x -> |alpha - x| and x -> |1 - x| the forward orbit of a
point x stays inside { <n*alpha + eps*x> : n integer, eps = +-1 }, so each
reachable value carries an integer label (n, eps). The label automaton below
reproduces both maps exactly on labels, which turns trajectory questions into
walks on a graph whose vertices are labels inside a finite window |n| <= W.

Vertices are classified Small/Medium/Large by their value relative to the two
cuts alpha and 1-alpha (roles swap for alpha < 1/2). Values are always
recomputed from labels, never propagated, so round-off stays below 1e-9 for
|n| up to 10^6.

rho_chart assigns each vertex a signed graph distance from a small base
vertex, the coordinate along which a random theta-walk becomes a simple +-1
walk. shrink_word searches words over {alpha, beta} that fold a value below a
threshold.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from enum import IntEnum

import numpy as np

from .errors import (ClassBoundaryError, PrecisionError, PreconditionError,
                     StructuralError, WordNotFoundError)

W_MAX = 10 ** 6          # |n| cap keeping label values accurate to < 1e-9
DEFAULT_WINDOW = 10 ** 4
SINGULAR_TOL = 1e-10
CLASS_TOL = 1e-12
RHO_INVALID = np.iinfo(np.int64).min  # vertex outside the chart's domain


@dataclass(frozen=True)
class OrbitLabel:
    """Symbolic name (n, eps) of the orbit value <n*alpha + eps*x>."""

    n: int
    eps: int

    def __post_init__(self):
        if self.eps not in (1, -1):
            raise PreconditionError("eps must be +1 or -1")

    def __str__(self):
        return f"({self.n},{'+1' if self.eps == 1 else '-1'})"


class VertexClass(IntEnum):
    SMALL = 0
    MEDIUM = 1
    LARGE = 2


def label_value(alpha: float, x: float, label: OrbitLabel) -> float:
    """Value <n*alpha + eps*x> of a label, accurate below 1e-9 in the window."""
    if abs(label.n) > W_MAX:
        raise PrecisionError(f"|n| > {W_MAX} exceeds the precision window")
    if not 0.0 <= x <= 1.0:
        raise PreconditionError("x must lie in [0, 1]")
    return (label.n * alpha + label.eps * x) % 1.0


def apply_theta_label(alpha: float, x: float, label: OrbitLabel,
                      theta: float) -> OrbitLabel:
    """Label automaton: the image label of one fold at theta in {alpha, 1}.

    Mirrors step() on values: the full fold negates the label, the alpha fold
    shifts n down when the value clears alpha and otherwise folds through 0,
    negating both coordinates. For singular x some labels share a value and
    the result is one valid representative.
    """
    if theta == 1.0:
        return OrbitLabel(-label.n, -label.eps)
    if theta != alpha:
        raise PreconditionError("theta must be alpha or 1")
    if label_value(alpha, x, label) >= alpha:
        return OrbitLabel(label.n - 1, label.eps)
    return OrbitLabel(-(label.n - 1), -label.eps)


def classify_vertex(alpha: float, value: float) -> VertexClass:
    """Small/Medium/Large relative to the cuts {alpha, 1-alpha}.

    Strict inequalities; a value within 1e-12 of a cut raises
    ClassBoundaryError since the classes are defined by open conditions.
    """
    lo_cut, hi_cut = sorted((alpha, 1.0 - alpha))
    if abs(value - lo_cut) <= CLASS_TOL or abs(value - hi_cut) <= CLASS_TOL:
        raise ClassBoundaryError(f"value {value!r} sits on a class boundary")
    if value < lo_cut:
        return VertexClass.SMALL
    if value < hi_cut:
        return VertexClass.MEDIUM
    return VertexClass.LARGE


_SINGULAR_SEEDS = ("0", "1/2", "alpha/2", "(1+alpha)/2")


def is_singular(alpha: float, x: float, window: int = DEFAULT_WINDOW) -> bool:
    """Window-bounded test whether x lies on one of the four singular orbits.

    True when some label value of x matches 0, 1/2, alpha/2 or (1+alpha)/2
    within 1e-10 for |n| <= window. Numerically undecidable in general; the
    window and tolerance are the documented compromise.
    """
    if not 0.0 <= x <= 1.0:
        raise PreconditionError("x must lie in [0, 1]")
    n = np.arange(-window, window + 1)
    seeds = np.array([0.0, 0.5, alpha / 2.0, (1.0 + alpha) / 2.0])
    for eps in (1.0, -1.0):
        vals = (n * alpha + eps * x) % 1.0
        diff = np.abs(vals[:, None] - seeds[None, :])
        if np.any(np.minimum(diff, 1.0 - diff) < SINGULAR_TOL):
            return True
    return False


class OrbitGraphWindow:
    """Materialized orbit graph on the labels |n| <= W, both eps rows.

    Vertices are indexed eps-row-major: index = block*(2W+1) + (n+W) with
    block 0 for eps=+1 and block 1 for eps=-1. Out-edge targets are stored as
    flat indices, -1 when the target label falls outside the window (only the
    alpha edge at n = -W can). Immutable after construction.
    """

    def __init__(self, alpha, x, window, values, classes, one_target,
                 alpha_target, coincidences):
        self.alpha = alpha
        self.base_x = x
        self.window = window
        self.values = values
        self.classes = classes
        self.one_target = one_target
        self.alpha_target = alpha_target
        self.coincidences = coincidences
        for arr in (values, classes, one_target, alpha_target):
            arr.flags.writeable = False

    # ---- indexing -------------------------------------------------------

    @property
    def size(self) -> int:
        return self.values.size

    def index_of(self, label: OrbitLabel) -> int:
        if abs(label.n) > self.window:
            raise PreconditionError(f"label {label} outside window {self.window}")
        block = 0 if label.eps == 1 else 1
        return block * (2 * self.window + 1) + (label.n + self.window)

    def label_at(self, index: int) -> OrbitLabel:
        m = 2 * self.window + 1
        block, offset = divmod(int(index), m)
        return OrbitLabel(offset - self.window, 1 if block == 0 else -1)

    def class_of(self, label: OrbitLabel) -> VertexClass:
        return VertexClass(int(self.classes[self.index_of(label)]))

    def out_edges(self, label: OrbitLabel):
        """[(theta, target_label), ...] for edges whose target is in-window."""
        i = self.index_of(label)
        out = [(1.0, self.label_at(self.one_target[i]))]
        if self.alpha_target[i] >= 0:
            out.append((self.alpha, self.label_at(self.alpha_target[i])))
        return out

    def interior_mask(self, margin: int = 2) -> np.ndarray:
        """Boolean mask excluding a margin of width `margin` at both n ends."""
        n = np.abs(np.arange(-self.window, self.window + 1))
        keep = n <= self.window - margin
        return np.concatenate([keep, keep])

    def class_frequencies(self, margin: int = 2) -> dict:
        mask = self.interior_mask(margin)
        total = int(np.count_nonzero(mask))
        cls = self.classes[mask]
        return {c.name.lower(): int(np.count_nonzero(cls == c)) / total
                for c in VertexClass}

    # ---- export ---------------------------------------------------------

    def to_dot(self) -> str:
        """DOT text: vertices labeled '(n,eps)/Class', edges labeled a or 1."""
        names = {0: "Small", 1: "Medium", 2: "Large"}
        lines = ["digraph orbit {"]
        for i in range(self.size):
            lab = self.label_at(i)
            lines.append(f'  "{lab}" [label="{lab}/{names[int(self.classes[i])]}"];')
        for i in range(self.size):
            lab = self.label_at(i)
            lines.append(f'  "{lab}" -> "{self.label_at(self.one_target[i])}" [label="1"];')
            if self.alpha_target[i] >= 0:
                lines.append(
                    f'  "{lab}" -> "{self.label_at(self.alpha_target[i])}" [label="a"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def build_graph_window(alpha: float, x: float, window: int) -> OrbitGraphWindow:
    """Build the orbit graph of x on the label window |n| <= W.

    Classifies every vertex (raising ClassBoundaryError if any value ties a
    class cut within 1e-12) and records value coincidences within 1e-10 as
    label pairs instead of merging vertices.
    """
    if window < 1:
        raise PreconditionError("window must be >= 1")
    if window > W_MAX:
        raise PrecisionError(f"window > {W_MAX} exceeds the precision cap")
    if not 0.0 <= x <= 1.0:
        raise PreconditionError("x must lie in [0, 1]")
    m = 2 * window + 1
    n = np.arange(-window, window + 1)
    values = np.concatenate([(n * alpha + x) % 1.0, (n * alpha - x) % 1.0])

    lo_cut, hi_cut = sorted((alpha, 1.0 - alpha))
    on_cut = (np.abs(values - lo_cut) <= CLASS_TOL) | (np.abs(values - hi_cut) <= CLASS_TOL)
    if np.any(on_cut):
        i = int(np.flatnonzero(on_cut)[0])
        block, offset = divmod(i, m)
        lab = OrbitLabel(offset - window, 1 if block == 0 else -1)
        raise ClassBoundaryError(
            f"label {lab} value {float(values[i])!r} ties a class boundary; "
            "alpha rational or x on a cut orbit")
    classes = np.where(values < lo_cut, 0, np.where(values < hi_cut, 1, 2)).astype(np.int8)

    nn = np.concatenate([n, n])
    block = np.repeat([0, 1], m)
    # full fold: (n, eps) -> (-n, -eps), always in-window
    one_target = (1 - block) * m + (-nn + window)
    # alpha fold: shift down when the value clears alpha, else fold through 0
    stay = values >= alpha
    tgt_n = np.where(stay, nn - 1, -(nn - 1))
    tgt_block = np.where(stay, block, 1 - block)
    alpha_target = np.where(np.abs(tgt_n) <= window,
                            tgt_block * m + (tgt_n + window), -1)

    order = np.argsort(values, kind="stable")
    close = np.flatnonzero(np.diff(values[order]) < SINGULAR_TOL)
    coincidences = []
    for j in close:
        a, b = int(order[j]), int(order[j + 1])
        ba, oa = divmod(a, m)
        bb, ob = divmod(b, m)
        coincidences.append((OrbitLabel(oa - window, 1 if ba == 0 else -1),
                             OrbitLabel(ob - window, 1 if bb == 0 else -1)))

    return OrbitGraphWindow(alpha, x, window, values, classes,
                            one_target.astype(np.int64),
                            alpha_target.astype(np.int64), coincidences)


# ---- signed distance chart ----------------------------------------------


def _undirected_neighbors(graph: OrbitGraphWindow):
    """CSR-style undirected adjacency from the two directed edge families."""
    src = np.arange(graph.size, dtype=np.int64)
    pairs = [np.stack([src, graph.one_target]),
             np.stack([src[graph.alpha_target >= 0],
                       graph.alpha_target[graph.alpha_target >= 0]])]
    edges = np.concatenate(pairs, axis=1)
    both = np.concatenate([edges, edges[::-1]], axis=1)
    order = np.argsort(both[0], kind="stable")
    heads, tails = both[0][order], both[1][order]
    indptr = np.searchsorted(heads, np.arange(graph.size + 1))
    return indptr, tails


def _bfs_levels(indptr, tails, start: int, blocked: int = -1) -> np.ndarray:
    """BFS distance from start over the CSR adjacency; -1 means unreached.

    `blocked` names a vertex treated as deleted (for component splitting).
    """
    n = indptr.size - 1
    dist = np.full(n, -1, dtype=np.int64)
    if start == blocked:
        raise PreconditionError("start vertex is blocked")
    dist[start] = 0
    frontier = np.array([start], dtype=np.int64)
    level = 0
    while frontier.size:
        nbrs = tails[np.concatenate([np.arange(indptr[v], indptr[v + 1]) for v in frontier])]
        nbrs = np.unique(nbrs)
        nbrs = nbrs[(dist[nbrs] == -1) & (nbrs != blocked)]
        level += 1
        dist[nbrs] = level
        frontier = nbrs
    return dist


@dataclass(frozen=True)
class RhoChart:
    """Signed BFS distance from a small base vertex v0; rho(v0) = 0.

    rho is positive on the component of the v0-deleted graph containing the
    label (n0+1, eps0) and negative on the other; vertices unreachable inside
    the window carry RHO_INVALID and are excluded from the domain.
    """

    v0: OrbitLabel
    rho: np.ndarray
    level_min_value: dict

    def rho_of(self, graph: OrbitGraphWindow, label: OrbitLabel) -> int:
        r = int(self.rho[graph.index_of(label)])
        if r == RHO_INVALID:
            raise StructuralError(f"label {label} outside the chart domain")
        return r


def rho_chart(graph: OrbitGraphWindow, x0_label: OrbitLabel) -> RhoChart:
    """Chart of signed graph distances from x0_label.

    Preconditions: the base vertex value lies strictly inside the small class
    (0 < value < min(alpha, 1-alpha)). Removing the base vertex must split
    its neighborhood into exactly two components; anything else is a
    structural failure (singular orbit or misconfigured base point).
    """
    v0 = graph.index_of(x0_label)
    val = graph.values[v0]
    if not 0.0 < val < min(graph.alpha, 1.0 - graph.alpha):
        raise PreconditionError(
            f"base vertex value {val!r} is not strictly inside the small class")
    indptr, tails = _undirected_neighbors(graph)
    dist = _bfs_levels(indptr, tails, v0)

    neighbors = np.unique(tails[indptr[v0]:indptr[v0 + 1]])
    neighbors = neighbors[neighbors != v0]
    comp_a = _bfs_levels(indptr, tails, int(neighbors[0]), blocked=v0) >= 0
    rest = neighbors[~comp_a[neighbors]]
    if rest.size == 0:
        raise StructuralError("base vertex is not a cut vertex of the window")
    comp_b = _bfs_levels(indptr, tails, int(rest[0]), blocked=v0) >= 0
    if np.any(~(comp_a | comp_b)[neighbors]):
        raise StructuralError("base vertex neighborhood splits into > 2 components")

    plus_ref = graph.index_of(OrbitLabel(x0_label.n + 1, x0_label.eps))
    if comp_a[plus_ref]:
        plus_comp = comp_a
    elif comp_b[plus_ref]:
        plus_comp = comp_b
    else:
        raise StructuralError("orientation reference vertex disconnected from base")

    rho = np.full(graph.size, RHO_INVALID, dtype=np.int64)
    reached = dist >= 0
    rho[reached] = np.where(plus_comp[reached], dist[reached], -dist[reached])
    rho[v0] = 0

    # per-level minimum vertex value, for far-small audits
    level_min = {}
    for r, v in zip(rho[reached].tolist(), graph.values[reached].tolist()):
        if r not in level_min or v < level_min[r]:
            level_min[r] = v
    return RhoChart(x0_label, rho, level_min)


# ---- line structure ------------------------------------------------------


def structure_stats(graph: OrbitGraphWindow, margin: int = 2) -> dict:
    """Class frequencies and the histogram of gaps between Large vertices.

    Runs are counted along the eps=+1 row: consecutive Large-class positions
    at distance d contribute a run of d-1 (the chain of edges crossing the
    non-Large stretch). For irrational alpha the runs take exactly two values
    q and q+1 where alpha = q*(1-alpha) + r (alpha > 1/2; roles swap below
    1/2), with asymptotic count ratio (1-alpha-r):r resp. (alpha-r):r.
    """
    w, alpha = graph.window, graph.alpha
    top = graph.classes[:2 * w + 1]
    keep = slice(margin, 2 * w + 1 - margin)
    marks = np.flatnonzero(top[keep] == VertexClass.LARGE)
    runs = np.diff(marks) - 1
    values, counts = np.unique(runs, return_counts=True)
    hist = {int(v): int(c) for v, c in zip(values, counts)}
    if alpha > 0.5:
        q = int(alpha / (1.0 - alpha))
        r = alpha - q * (1.0 - alpha)
        expected = (1.0 - alpha - r) / r
    else:
        q = int((1.0 - alpha) / alpha)
        r = (1.0 - alpha) - q * alpha
        expected = (alpha - r) / r
    measured = hist.get(q, 0) / hist[q + 1] if hist.get(q + 1) else float("nan")
    return {
        "class_frequencies": graph.class_frequencies(margin),
        "run_histogram": hist,
        "q": q,
        "expected_ratio": expected,
        "measured_ratio": measured,
    }


# ---- word search ---------------------------------------------------------


def shrink_word(alpha: float, beta: float, m: float, threshold: float,
                max_len: int = 256) -> list[float]:
    """Shortest word over {alpha, beta} folding m below threshold.

    Breadth-first over reached values, deduplicated on 1e-12 buckets, so the
    search always terminates by max_len; exhaustion raises WordNotFoundError
    (the caller enlarges max_len). The returned letters are in application
    order, so replaying them through iterate_forward(word, m) lands below
    threshold.
    """
    if not 0.0 < alpha < beta:
        raise PreconditionError("need 0 < alpha < beta")
    if threshold <= 0.0:
        raise PreconditionError("threshold must be positive")
    if m < 0.0:
        raise PreconditionError("m must be >= 0")
    if m < threshold:
        return []
    bucket = lambda v: int(round(v / 1e-12))
    start = bucket(m)
    parent = {start: None}
    frontier = deque([(m, start, 0)])
    while frontier:
        value, key, depth = frontier.popleft()
        if depth >= max_len:
            break
        for letter in (alpha, beta):
            nxt = abs(letter - value)
            nk = bucket(nxt)
            if nk in parent:
                continue
            parent[nk] = (key, letter)
            if nxt < threshold:
                word = []
                cur = nk
                while parent[cur] is not None:
                    cur, used = parent[cur]
                    word.append(used)
                word.reverse()
                return word
            frontier.append((nxt, nk, depth + 1))
    raise WordNotFoundError(
        f"no word of length <= {max_len} folds {m} below {threshold}")
