"""Piecewise-linear curves in the taxicab Poincare disk and their lengths.

A :class:`PolyCurve` is a plain vertex list; no parameterisation is stored.
Repeated consecutive vertices are allowed and mean the curve is stationary
for a while (the shadow construction needs this).

Lengths are exact up to rounding.  Each edge is split where it crosses a
coordinate axis; on each piece the taxicab norm ``u`` is linear, so the
integral of ``T / (1 - u**2)`` has the antiderivative ``atanh``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy import integrate

from .metric import Point, as_point, minimal_point


class CurveError(ValueError):
    """Raised for malformed or non-composable curves."""


@dataclass(frozen=True)
class PolyCurve:
    vertices: tuple[Point, ...]

    def __init__(self, vertices: Iterable):
        verts = tuple(as_point(v) for v in vertices)
        if len(verts) < 2:
            raise CurveError("a curve needs at least two vertices")
        object.__setattr__(self, "vertices", verts)

    @classmethod
    def from_array(cls, arr) -> "PolyCurve":
        return cls(map(tuple, np.asarray(arr, dtype=float)))

    def as_array(self) -> np.ndarray:
        return np.array([[v.x1, v.x2] for v in self.vertices], dtype=float)

    @property
    def start(self) -> Point:
        return self.vertices[0]

    @property
    def end(self) -> Point:
        return self.vertices[-1]

    def __len__(self):
        return len(self.vertices)

    def __iter__(self):
        return iter(self.vertices)


def segment(p: Point, q: Point) -> PolyCurve:
    return PolyCurve((p, q))


def concat(a: PolyCurve, b: PolyCurve) -> PolyCurve:
    """Join ``a`` then ``b``; the shared endpoint appears once."""
    if a.end != b.start:
        raise CurveError(f"cannot concatenate: {a.end} != {b.start}")
    return PolyCurve(a.vertices + b.vertices[1:])


def l_shaped(p: Point, q: Point) -> PolyCurve:
    """The L-shaped minimiser ``p -> m(p, q) -> q``."""
    m = minimal_point(p, q)
    if m == p or m == q:
        return PolyCurve((p, q))
    return PolyCurve((p, m, q))


# -- length ------------------------------------------------------------------

def _atanh_ratio(delta):
    """``atanh(delta) / delta`` with the removable singularity at 0 filled in."""
    delta = np.asarray(delta, dtype=float)
    small = np.abs(delta) < 1e-4
    safe = np.where(small, 0.5, delta)
    d2 = delta * delta
    series = 1.0 + d2 / 3.0 + d2 * d2 / 5.0
    return np.where(small, series, np.arctanh(safe) / safe)


def _piece_lengths(P0, P1):
    """Lengths of straight pieces that each stay in one closed quadrant."""
    taxi = np.abs(P1 - P0).sum(axis=-1)
    u0 = np.abs(P0).sum(axis=-1)
    u1 = np.abs(P1).sum(axis=-1)
    denom = 1.0 - u0 * u1
    # (atanh u1 - atanh u0) / (u1 - u0) == atanh(delta) / delta / (1 - u0 u1)
    delta = (u1 - u0) / denom
    return taxi * _atanh_ratio(delta) / denom


def edge_lengths(A, B) -> np.ndarray:
    """Lengths of the straight edges ``A[i] -> B[i]`` (arrays of shape ``(..., 2)``)."""
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    shape = A.shape[:-1]
    A = A.reshape(-1, 2)
    B = B.reshape(-1, 2)
    D = B - A
    # parameters where each coordinate changes sign strictly inside the edge
    with np.errstate(divide="ignore", invalid="ignore"):
        tc = np.where(A * B < 0, A / (A - B), 1.0)
    ts = np.sort(np.column_stack([np.zeros(len(A)), tc, np.ones(len(A))]), axis=1)
    pts = A[:, None, :] + ts[:, :, None] * D[:, None, :]
    # pin the crossing coordinate to exactly zero
    for k in range(2):
        hit = (A[:, k] * B[:, k] < 0)[:, None] & (ts == tc[:, k][:, None])
        pts[:, :, k] = np.where(hit, 0.0, pts[:, :, k])
    total = _piece_lengths(pts[:, :-1], pts[:, 1:]).sum(axis=1)
    return total.reshape(shape)


def batch_length(V) -> np.ndarray:
    """Lengths of many curves given as an ``(N, K, 2)`` vertex array.

    Shorter curves can be padded by repeating their last vertex.
    """
    V = np.asarray(V, dtype=float)
    return edge_lengths(V[:, :-1], V[:, 1:]).sum(axis=1)


def _integrand(a, d):
    tax = abs(d[0]) + abs(d[1])

    def f(t):
        u = abs(a[0] + t * d[0]) + abs(a[1] + t * d[1])
        return tax / (1.0 - u * u)

    return f


def length_quadrature(c: PolyCurve, epsabs: float = 1e-10) -> float:
    """Length by adaptive Gauss-Kronrod quadrature of the raw integrand.

    Independent of the closed form; used to cross-check it.
    """
    V = c.as_array()
    total = 0.0
    for a, b in zip(V[:-1], V[1:]):
        d = b - a
        if not d.any():
            continue
        kinks = [a[k] / (a[k] - b[k]) for k in range(2) if a[k] * b[k] < 0]
        val, _ = integrate.quad(_integrand(a, d), 0.0, 1.0, points=kinks or None,
                                epsabs=epsabs, epsrel=0.0, limit=200)
        total += val
    return total


def length(c: PolyCurve, method: str = "closed") -> float:
    if method == "quadrature":
        return length_quadrature(c)
    if method != "closed":
        raise ValueError(f"unknown method {method!r}")
    V = c.as_array()
    return float(edge_lengths(V[:-1], V[1:]).sum())


# -- shape predicates and transforms -----------------------------------------

def _weakly_monotone(x: np.ndarray) -> bool:
    d = np.diff(x)
    return bool((d >= 0).all() or (d <= 0).all())


def is_doubly_monotonic(c: PolyCurve) -> bool:
    V = c.as_array()
    return _weakly_monotone(V[:, 0]) and _weakly_monotone(V[:, 1])


def hausdorff(a: PolyCurve, b: PolyCurve, per_edge: int = 64) -> float:
    """Approximate Hausdorff distance between two traces.

    Each trace is sampled ``per_edge`` times per edge and measured exactly
    against the other polyline.
    """
    return max(_directed(a, b, per_edge), _directed(b, a, per_edge))


def _sample_polyline(V, per_edge):
    t = np.linspace(0.0, 1.0, per_edge)[None, :, None]
    pts = V[:-1, None, :] + t * (V[1:] - V[:-1])[:, None, :]
    return pts.reshape(-1, 2)


def _point_polyline_dist(X, V):
    A, B = V[:-1], V[1:]
    D = B - A
    dd = (D * D).sum(axis=1)
    rel = X[:, None, :] - A[None, :, :]
    with np.errstate(divide="ignore", invalid="ignore"):
        t = np.where(dd > 0, (rel * D[None]).sum(axis=2) / dd, 0.0)
    t = np.clip(t, 0.0, 1.0)
    closest = A[None] + t[:, :, None] * D[None]
    return np.sqrt(((X[:, None, :] - closest) ** 2).sum(axis=2)).min(axis=1)


def _directed(a, b, per_edge):
    X = _sample_polyline(a.as_array(), per_edge)
    return float(_point_polyline_dist(X, b.as_array()).max())


def equivalent(a: PolyCurve, b: PolyCurve, tol: float = 1e-9) -> bool:
    """Same trace (Hausdorff within ``tol``) and same length (within ``tol``)."""
    return hausdorff(a, b) <= tol and abs(length(a) - length(b)) <= tol


def _axis_index(axis) -> int:
    if axis in (0, "x1"):
        return 0
    if axis in (1, "x2"):
        return 1
    raise ValueError(f"axis must be 'x1' or 'x2', got {axis!r}")


def fold_to_halfplane(c: PolyCurve, axis) -> PolyCurve:
    """Reflect the parts of ``c`` across the axis ``{x_k = 0}`` onto the endpoints' side.

    ``axis`` names the folded coordinate.  Vertices are inserted where the
    curve crosses the axis, so the folded curve has the same length.
    """
    k = _axis_index(axis)
    V = c.as_array()
    s0, s1 = np.sign(V[0, k]), np.sign(V[-1, k])
    if s0 * s1 < 0:
        raise CurveError("endpoints lie strictly on opposite sides of the axis")
    side = s0 or s1 or 1.0
    out = [V[0]]
    for a, b in zip(V[:-1], V[1:]):
        if a[k] * b[k] < 0:
            t = a[k] / (a[k] - b[k])
            x = a + t * (b - a)
            x[k] = 0.0
            out.append(x)
        out.append(b)
    W = np.array(out)
    W[:, k] = side * np.abs(W[:, k])
    return PolyCurve.from_array(W)


def _quadrant_signs(V: np.ndarray) -> np.ndarray:
    signs = np.ones(2)
    for k in range(2):
        col = V[:, k]
        if (col > 0).any() and (col < 0).any():
            raise CurveError("curve is not contained in one closed quadrant")
        if (col < 0).any():
            signs[k] = -1.0
    return signs


def doubly_monotonic_shadow(c: PolyCurve) -> PolyCurve:
    """Componentwise running minimum of ``|x_i|`` along ``c``, in ``c``'s quadrant.

    The shadow starts where ``c`` starts, never moves away from the origin,
    and waits (repeated vertices) while ``c`` wanders outward.
    """
    V = c.as_array()
    signs = _quadrant_signs(V)
    W = np.abs(V)
    pts = [W[0]]
    run = W[0].copy()
    for a, b in zip(W[:-1], W[1:]):
        # inside an edge a coordinate's running min switches on where it
        # crosses the current minimum from above
        cuts = set()
        for k in range(2):
            if b[k] < run[k] < a[k]:
                cuts.add((a[k] - run[k]) / (a[k] - b[k]))
        for t in sorted(cuts):
            x = a + t * (b - a)
            run = np.minimum(run, x)
            pts.append(run.copy())
        run = np.minimum(run, b)
        pts.append(run.copy())
    return PolyCurve.from_array(np.array(pts) * signs)


# -- sampled functions (cumulative / residual minimum) ------------------------

@dataclass(frozen=True)
class SampledFunction:
    t: np.ndarray
    values: np.ndarray

    def __init__(self, t: Sequence[float], values: Sequence[float]):
        t = np.asarray(t, dtype=float)
        values = np.asarray(values, dtype=float)
        if t.shape != values.shape or t.ndim != 1 or len(t) < 2:
            raise ValueError("t and values must be equal-length 1-d sequences")
        if t[0] != 0.0 or t[-1] != 1.0 or not (np.diff(t) > 0).all():
            raise ValueError("t must increase strictly from 0 to 1")
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "values", values)

    @classmethod
    def uniform(cls, values: Sequence[float]) -> "SampledFunction":
        return cls(np.linspace(0.0, 1.0, len(values)), values)


def cumulative_min(f: SampledFunction) -> SampledFunction:
    return SampledFunction(f.t, np.minimum.accumulate(f.values))


def residual_min(f: SampledFunction) -> SampledFunction:
    return SampledFunction(f.t, np.minimum.accumulate(f.values[::-1])[::-1])


def segment_length_closed(p: Point, q: Point) -> float:
    """Length of the straight segment ``p -> q`` (scalar convenience)."""
    return float(edge_lengths(np.array(p), np.array(q)))


def radial_length(p: Point, q: Point) -> float:
    """Length of any doubly monotonic curve from ``p`` to a point ``q`` it lies beyond."""
    return math.atanh(p.norm) - math.atanh(q.norm)
