"""Points of the taxicab Poincare disk and its closed-form distance.

The disk is the open set ``|x1| + |x2| < 1`` with tangent norm
``(|v1| + |v2|) / (1 - (|x1| + |x2|)**2)``.  Every distance reduces to
origin-centred radii ``atanh(|x1| + |x2|)`` and the minimal point of a pair.

Scalar functions take :class:`Point`; the ``*_array`` variants take arrays
of shape ``(..., 2)`` and are used by the scans and oracles.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

#: Points with taxicab norm at or above ``1 - BOUNDARY_GUARD`` are rejected.
BOUNDARY_GUARD = 1e-12


class DiskError(ValueError):
    """Raised for coordinates that are not in the open disk."""


@dataclass(frozen=True)
class Point:
    x1: float
    x2: float

    def __post_init__(self):
        x1, x2 = float(self.x1), float(self.x2)
        if not (math.isfinite(x1) and math.isfinite(x2)):
            raise DiskError(f"non-finite coordinates ({x1}, {x2})")
        if abs(x1) + abs(x2) >= 1.0 - BOUNDARY_GUARD:
            raise DiskError(
                f"({x1}, {x2}) has taxicab norm {abs(x1) + abs(x2)!r}, outside the disk")
        object.__setattr__(self, "x1", x1)
        object.__setattr__(self, "x2", x2)

    @property
    def norm(self) -> float:
        """Taxicab norm ``|x1| + |x2|``."""
        return abs(self.x1) + abs(self.x2)

    def __iter__(self):
        yield self.x1
        yield self.x2

    def __array__(self, dtype=None, copy=None):
        return np.array([self.x1, self.x2], dtype=dtype)

    def __repr__(self):
        return f"Point({self.x1!r}, {self.x2!r})"


ORIGIN = Point(0.0, 0.0)


def as_point(obj) -> Point:
    if isinstance(obj, Point):
        return obj
    x1, x2 = obj
    return Point(x1, x2)


def sgn(x: float) -> int:
    # -0.0 maps to 0 like +0.0
    return int(x > 0) - int(x < 0)


def ell(a: float, b: float) -> float:
    """Signed minimum of magnitudes when the signs agree, else 0."""
    s = sgn(a)
    if s == 0 or s != sgn(b):
        return 0.0
    return s * min(abs(a), abs(b))


def minimal_point(p: Point, q: Point) -> Point:
    """The point farthest from the origin that both ``p`` and ``q`` lie beyond."""
    return Point(ell(p.x1, q.x1), ell(p.x2, q.x2))


class Beyond(enum.Enum):
    FALSE = "false"
    BEYOND = "beyond"
    STRICTLY_BEYOND = "strictly_beyond"

    def __bool__(self):
        return self is not Beyond.FALSE


def lies_beyond(p: Point, q: Point) -> Beyond:
    """Classify whether ``p`` lies (strictly) beyond ``q``.

    Uses exact float equality ``m(p, q) == q``; no tolerance is applied so
    that case dispatch downstream is deterministic.
    """
    m = minimal_point(p, q)
    if m.x1 != q.x1 or m.x2 != q.x2:
        return Beyond.FALSE
    if p.x1 != q.x1 and p.x2 != q.x2:
        return Beyond.STRICTLY_BEYOND
    return Beyond.BEYOND


def radius_of(p: Point) -> float:
    """Distance from the origin, ``atanh(|p1| + |p2|)``."""
    return math.atanh(abs(p.x1) + abs(p.x2))


def distance(p: Point, q: Point) -> float:
    m = minimal_point(p, q)
    return radius_of(p) + radius_of(q) - 2.0 * radius_of(m)


# -- vectorised forms ------------------------------------------------------

def ell_array(a, b):
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    same = np.sign(a) == np.sign(b)
    return np.where(same, np.sign(a) * np.minimum(np.abs(a), np.abs(b)), 0.0)


def minimal_point_array(P, Q):
    P = np.asarray(P, dtype=float)
    Q = np.asarray(Q, dtype=float)
    return ell_array(P, Q)


def radius_array(P):
    P = np.asarray(P, dtype=float)
    return np.arctanh(np.abs(P[..., 0]) + np.abs(P[..., 1]))


def distance_array(P, Q):
    """Pairwise distance along the leading axes of two ``(..., 2)`` arrays."""
    P = np.asarray(P, dtype=float)
    Q = np.asarray(Q, dtype=float)
    M = minimal_point_array(P, Q)
    return radius_array(P) + radius_array(Q) - 2.0 * radius_array(M)


def in_disk_array(P, guard: float = BOUNDARY_GUARD):
    return np.abs(np.asarray(P, dtype=float)).sum(axis=-1) < 1.0 - guard


def sample_disk(rng: np.random.Generator, n: int, scale: float = 1.0) -> np.ndarray:
    """Uniform samples from the disk of taxicab radius ``scale``.

    The map ``(u, v) -> ((u + v)/2, (u - v)/2)`` takes the square
    ``[-1, 1]^2`` onto the diamond, with taxicab norm ``max(|u|, |v|)``.
    """
    uv = rng.uniform(-1.0, 1.0, size=(n, 2)) * scale
    pts = np.column_stack([(uv[:, 0] + uv[:, 1]) / 2, (uv[:, 0] - uv[:, 1]) / 2])
    # draws landing in the guard band are pulled just inside it
    norm = np.abs(pts).sum(axis=1)
    limit = 1.0 - 4 * BOUNDARY_GUARD
    over = norm >= limit
    if over.any():
        pts[over] *= (limit / norm[over])[:, None]
    return pts
