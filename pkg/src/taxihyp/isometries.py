"""The dihedral group of order 8 acting on the disk.

Every element is a signed permutation of the coordinates, so applying one
is exact in floating point.
"""

from __future__ import annotations

import enum
from typing import Callable

import numpy as np

from .metric import Point, distance, distance_array, sample_disk


class Isometry(enum.Enum):
    # value: 2x2 integer matrix, rows give the new coordinates
    IDENTITY = ((1, 0), (0, 1))
    ROT90 = ((0, -1), (1, 0))
    ROT180 = ((-1, 0), (0, -1))
    ROT270 = ((0, 1), (-1, 0))
    REFLECT_X1 = ((1, 0), (0, -1))        # across the x1-axis
    REFLECT_X2 = ((-1, 0), (0, 1))        # across the x2-axis
    REFLECT_DIAG = ((0, 1), (1, 0))       # across x2 = x1
    REFLECT_ANTIDIAG = ((0, -1), (-1, 0))  # across x2 = -x1

    @property
    def matrix(self) -> np.ndarray:
        return np.array(self.value, dtype=int)

    @classmethod
    def from_matrix(cls, mat) -> "Isometry":
        key = tuple(tuple(int(v) for v in row) for row in np.asarray(mat))
        return cls(key)

    def __call__(self, p):
        return apply(self, p)


def _apply_coords(g: Isometry, x1, x2):
    (a, b), (c, d) = g.value
    # signed permutation: exactly one nonzero per row
    y1 = a * x1 if a else b * x2
    y2 = c * x1 if c else d * x2
    return y1, y2


def apply(g: Isometry, p: Point) -> Point:
    return Point(*_apply_coords(g, p.x1, p.x2))


def apply_array(g: Isometry, P) -> np.ndarray:
    P = np.asarray(P, dtype=float)
    y1, y2 = _apply_coords(g, P[..., 0], P[..., 1])
    return np.stack([y1, y2], axis=-1)


def compose(g: Isometry, h: Isometry) -> Isometry:
    """``g . h``: apply ``h`` first, then ``g``."""
    return Isometry.from_matrix(g.matrix @ h.matrix)


def inverse(g: Isometry) -> Isometry:
    return Isometry.from_matrix(g.matrix.T)


def cayley_table() -> dict[tuple[Isometry, Isometry], Isometry]:
    return {(g, h): compose(g, h) for g in Isometry for h in Isometry}


def map_deviation(f: Callable[[np.ndarray], np.ndarray], trials: int, seed: int) -> float:
    """Largest ``|d(f p, f q) - d(p, q)|`` over random pairs.

    ``f`` maps an ``(N, 2)`` array of points to another; it need not be an
    isometry, which lets the harness be checked against a known non-isometry.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = np.random.default_rng(seed)
    P = sample_disk(rng, trials)
    Q = sample_disk(rng, trials)
    dev = np.abs(distance_array(f(P), f(Q)) - distance_array(P, Q))
    return float(dev.max())


def is_isometry_witness(g: Isometry, trials: int = 10_000, seed: int = 0) -> float:
    return map_deviation(lambda P: apply_array(g, P), trials, seed)


def pinning_roots(p: Point, samples: int = 4096, tol: float = 1e-9) -> list[Point]:
    """Points on the origin circle through ``p`` that also lie on two axis-centred circles.

    For ``p`` off the axes take ``q = (n, 0)`` and ``s = (0, n)`` with
    ``n = |p1| + |p2|`` and the circles through ``p`` about ``q`` and ``s``.
    Returns every simultaneous root found along the diamond ``|x| = n``; a
    fixed point of the whole group action is pinned when there is exactly one.
    """
    n = p.norm
    q, s = Point(n, 0.0), Point(0.0, n)
    r_q, r_s = distance(q, p), distance(s, p)
    # walk the diamond of taxicab radius n by an angle-like parameter
    t = np.linspace(0.0, 4.0, 4 * samples, endpoint=False)

    def at(u):
        k, f = int(u) % 4, u - int(u)
        corners = [(n, 0.0), (0.0, n), (-n, 0.0), (0.0, -n), (n, 0.0)]
        a, b = np.array(corners[k]), np.array(corners[k + 1])
        return a + f * (b - a)

    def g(u):
        x = Point(*at(u))
        return distance(q, x) - r_q

    roots = []
    vals = [g(u) for u in t]
    for k in range(len(t)):
        u0, u1 = t[k], t[(k + 1) % len(t)] + (4.0 if k + 1 == len(t) else 0.0)
        g0, g1 = vals[k], vals[(k + 1) % len(t)]
        if g0 == 0.0:
            u = u0
        elif g0 * g1 < 0:
            lo, hi = u0, u1
            for _ in range(80):
                mid = 0.5 * (lo + hi)
                if (g(mid) < 0) == (g0 < 0):
                    lo = mid
                else:
                    hi = mid
            u = 0.5 * (lo + hi)
        else:
            continue
        x = Point(*at(u))
        if abs(distance(s, x) - r_s) < tol:
            roots.append(x)
    return roots
