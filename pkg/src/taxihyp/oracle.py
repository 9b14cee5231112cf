"""Brute-force checks of the minimiser and distance results.

Nothing here calls :func:`taxihyp.metric.distance` to obtain its answer; the
closed form is only attached to reports for comparison.

* :func:`grid_shortest_path` runs Dijkstra on an 8-connected lattice whose
  edges are weighted by their exact curve length.
* :func:`perturbation_search` evaluates many random polygonal curves.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import dijkstra

from .curves import PolyCurve, batch_length, edge_lengths, l_shaped
from .metric import Point, distance, lies_beyond, minimal_point, sample_disk


class OracleError(ValueError):
    pass


@dataclass(frozen=True)
class GridSpec:
    step: float = 0.005
    margin: float = 0.05

    def __post_init__(self):
        if not self.step > 0:
            raise OracleError(f"grid step must be positive, got {self.step}")
        if self.margin < 10 * self.step - 1e-12:
            raise OracleError("margin must be at least 10 grid steps")
        if self.margin >= 1:
            raise OracleError("margin must be < 1")

    @property
    def radius(self) -> int:
        """Largest ``|i| + |j|`` of a node."""
        return int(math.floor((1.0 - self.margin) / self.step + 1e-9))

    def snap(self, p: Point) -> tuple[int, int]:
        i, j = round(p.x1 / self.step), round(p.x2 / self.step)
        if abs(i) + abs(j) > self.radius:
            raise OracleError(f"{p} is outside the grid extent")
        return i, j

    def node_point(self, ij) -> Point:
        return Point(ij[0] * self.step, ij[1] * self.step)


@dataclass
class _Lattice:
    spec: GridSpec
    index: np.ndarray      # (2R+1, 2R+1) node id or -1
    coords: np.ndarray     # (n, 2)
    ij: np.ndarray         # (n, 2) integer indices
    graph: object


_OFFSETS = ((1, 0), (0, 1), (1, 1), (1, -1))


@functools.lru_cache(maxsize=4)
def _lattice(spec: GridSpec) -> _Lattice:
    R = spec.radius
    rng = np.arange(-R, R + 1)
    I, J = np.meshgrid(rng, rng, indexing="ij")
    inside = np.abs(I) + np.abs(J) <= R
    index = -np.ones(I.shape, dtype=np.int64)
    index[inside] = np.arange(inside.sum())
    ij = np.column_stack([I[inside], J[inside]])
    coords = ij * spec.step
    rows, cols, weights = [], [], []
    for di, dj in _OFFSETS:
        ti, tj = ij[:, 0] + di, ij[:, 1] + dj
        ok = (np.abs(ti) + np.abs(tj) <= R)
        src = np.nonzero(ok)[0]
        dst = index[ti[ok] + R, tj[ok] + R]
        w = edge_lengths(coords[src], coords[dst])
        rows.append(src)
        cols.append(dst)
        weights.append(w)
    rows = np.concatenate(rows)
    cols = np.concatenate(cols)
    weights = np.concatenate(weights)
    n = len(coords)
    graph = coo_matrix(
        (np.concatenate([weights, weights]),
         (np.concatenate([rows, cols]), np.concatenate([cols, rows]))),
        shape=(n, n)).tocsr()
    return _Lattice(spec, index, coords, ij, graph)


@dataclass
class OracleReport:
    query: tuple[Point, Point]
    dp_value: float
    closed_form: float
    rel_error: float
    path: PolyCurve
    h: float
    seed: Optional[int] = None

    def to_json(self) -> dict:
        p, q = self.query
        return {
            "query": [[p.x1, p.x2], [q.x1, q.x2]],
            "dp_value": self.dp_value,
            "closed_form": self.closed_form,
            "rel_error": self.rel_error,
            "h": self.h,
            "seed": self.seed,
        }


def grid_shortest_path(p: Point, q: Point, g: GridSpec = GridSpec()) -> OracleReport:
    """Shortest lattice path between the grid nodes nearest ``p`` and ``q``.

    Coincident nodes give value 0 and a stationary two-vertex path.
    """
    a, b = g.snap(p), g.snap(q)
    ps, qs = g.node_point(a), g.node_point(b)
    if a == b:
        return OracleReport((ps, qs), 0.0, 0.0, 0.0, PolyCurve((ps, ps)), g.step)
    lat = _lattice(g)
    R = g.radius
    src = lat.index[a[0] + R, a[1] + R]
    dst = lat.index[b[0] + R, b[1] + R]
    dist, pred = dijkstra(lat.graph, directed=False, indices=src, return_predecessors=True)
    chain = [dst]
    while chain[-1] != src:
        chain.append(pred[chain[-1]])
    chain.reverse()
    path = PolyCurve((Point(*lat.coords[k]) for k in chain))
    dp = float(dist[dst])
    closed = distance(ps, qs)
    return OracleReport((ps, qs), dp, closed, abs(dp - closed) / closed, path, g.step)


def _pad(curves: list[np.ndarray]) -> np.ndarray:
    k = max(len(c) for c in curves)
    out = np.empty((len(curves), k, 2))
    for n, c in enumerate(curves):
        out[n, :len(c)] = c
        out[n, len(c):] = c[-1]
    return out


def random_curves(p: Point, q: Point, n: int, rng: np.random.Generator,
                  max_interior: int = 8) -> np.ndarray:
    """``n`` random curves from ``p`` to ``q`` as a padded ``(n, 10, 2)`` array.

    Half use 1-8 interior vertices uniform in the disk; the rest jitter the
    vertices of the L-shaped curve and a straight segment by small amounts.
    """
    K = max_interior + 2
    V = np.empty((n, K, 2))
    V[:, 0] = np.asarray(p)
    counts = rng.integers(1, max_interior + 1, size=n)
    interior = sample_disk(rng, n * max_interior).reshape(n, max_interior, 2)
    half = n // 2
    # local perturbations around the minimiser: jitter points on lambda
    lam = l_shaped(p, q).as_array()
    lam_len = np.r_[0.0, np.cumsum(np.abs(np.diff(lam, axis=0)).sum(axis=1))]
    s = np.sort(rng.uniform(0, lam_len[-1], size=(n - half, max_interior)), axis=1)
    base = np.stack([np.interp(s, lam_len, lam[:, k]) for k in range(2)], axis=-1)
    scale = 10.0 ** rng.uniform(-6, -1, size=(n - half, 1, 1))
    jitter = base + scale * rng.normal(size=base.shape)
    norm = np.abs(jitter).sum(axis=-1, keepdims=True)
    jitter = np.where(norm < 0.999, jitter, base)
    interior[half:] = jitter
    for m in range(n):
        c = counts[m]
        V[m, 1:1 + c] = interior[m, :c]
        V[m, 1 + c:] = np.asarray(q)
    return V


def _monotone_staircase(a: np.ndarray, b: np.ndarray, k: int, rng) -> np.ndarray:
    """A random doubly monotonic polyline from ``a`` to ``b`` with ``k`` interior vertices."""
    f1 = np.sort(rng.uniform(0, 1, k))
    f2 = np.sort(rng.uniform(0, 1, k))
    if rng.random() < 0.5:
        # axis-parallel staircase: alternate moving x1 then x2
        xs = np.r_[0.0, f1, 1.0]
        ys = np.r_[0.0, f2, 1.0]
        pts = []
        for n in range(k + 1):
            pts.append((xs[n], ys[n]))
            pts.append((xs[n + 1], ys[n]))
        pts.append((1.0, 1.0))
        F = np.array(pts)
    else:
        F = np.vstack([[0.0, 0.0], np.column_stack([f1, f2]), [1.0, 1.0]])
    return a + F * (b - a)


def staircases(p: Point, q: Point, n: int, rng) -> np.ndarray:
    """``n`` doubly monotonic curves through ``m(p, q)``; the first is the L-shaped curve."""
    m = np.asarray(minimal_point(p, q))
    P, Q = np.asarray(p), np.asarray(q)
    curves = [l_shaped(p, q).as_array()]
    for _ in range(n - 1):
        k1, k2 = rng.integers(0, 4, size=2)
        leg1 = _monotone_staircase(P, m, int(k1), rng)
        leg2 = _monotone_staircase(m, Q, int(k2), rng)
        curves.append(np.vstack([leg1, leg2[1:]]))
    return _pad(curves)


@dataclass
class SearchResult:
    min_length: float
    random_min: float
    staircase_min: float
    staircase_max: float
    best: PolyCurve
    trials: int
    seed: int


def perturbation_search(p: Point, q: Point, trials: int = 1000, seed: int = 0,
                        staircase_count: Optional[int] = None) -> SearchResult:
    """Minimum length over random curves and monotone staircases from ``p`` to ``q``.

    With ``trials == 1`` the only candidate is the L-shaped curve.
    """
    if trials < 1:
        raise OracleError("trials must be >= 1")
    rng = np.random.default_rng(seed)
    if staircase_count is None:
        staircase_count = 1 if trials == 1 else max(1, min(64, trials // 10))
    S = staircases(p, q, staircase_count, rng)
    s_len = batch_length(S)
    n_rand = trials - staircase_count
    if n_rand > 0:
        R = random_curves(p, q, n_rand, rng)
        r_len = batch_length(R)
        random_min = float(r_len.min())
    else:
        R, r_len, random_min = None, None, math.inf
    if random_min < s_len.min():
        k = int(np.argmin(r_len))
        best = R[k]
    else:
        best = S[int(np.argmin(s_len))]
    return SearchResult(
        min_length=float(min(random_min, s_len.min())),
        random_min=random_min,
        staircase_min=float(s_len.min()),
        staircase_max=float(s_len.max()),
        best=PolyCurve.from_array(best),
        trials=trials,
        seed=seed,
    )


CASES = ("case1", "case2", "case3", "case4")


def minimizer_profile(p: Point, q: Point) -> str:
    """Which of the four minimiser cases the pair falls into.

    Quadrants are closed, so a point on an axis shares a quadrant with its
    neighbours on both sides.
    """
    if p == q:
        raise OracleError("minimizer_profile needs distinct points")
    same1 = p.x1 * q.x1 >= 0
    same2 = p.x2 * q.x2 >= 0
    if same1 and same2:
        return "case1" if (lies_beyond(p, q) or lies_beyond(q, p)) else "case2"
    if not same1 and not same2:
        return "case3"
    return "case4"
