"""Gromov hyperbolicity scans, geodesic lines, and Playfair failure.

A *line* here is a complete polyline with at most one corner such that
every finite sub-arc between two of its points is doubly monotonic and runs
through their minimal point, i.e. is itself a length minimiser.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .metric import (Point, distance, distance_array, minimal_point,
                     minimal_point_array, sample_disk)

LN3 = math.log(3.0)
HALF_LN3 = math.atanh(0.5)


class LineError(ValueError):
    pass


class WitnessShortfall(RuntimeError):
    """The sweep found fewer disjoint lines than requested."""

    def __init__(self, found: int, wanted: int):
        super().__init__(f"found {found} disjoint lines through the point, wanted {wanted}")
        self.found = found
        self.wanted = wanted


# -- Gromov products -----------------------------------------------------------

def gromov_product(x: Point, y: Point, z: Point) -> float:
    return 0.5 * (distance(x, z) + distance(y, z) - distance(x, y))


def gromov_array(X, Y, Z):
    return 0.5 * (distance_array(X, Z) + distance_array(Y, Z) - distance_array(X, Y))


def required_delta_array(P, Q, S, W) -> np.ndarray:
    """Smallest ``delta`` making ``G(p,q;w) >= min(G(p,s;w), G(q,s;w)) - delta`` hold."""
    lhs = gromov_array(P, Q, W)
    rhs = np.minimum(gromov_array(P, S, W), gromov_array(Q, S, W))
    return np.maximum(0.0, rhs - lhs)


@dataclass
class GromovReport:
    quadruple: tuple[Point, Point, Point, Point]
    lhs: float
    rhs_min: float
    delta: float

    @property
    def slack(self) -> float:
        return self.lhs - self.rhs_min

    @property
    def required_delta(self) -> float:
        return max(0.0, -self.slack)

    @property
    def passed(self) -> bool:
        return self.slack >= -self.delta


def four_point_check(p: Point, q: Point, s: Point, w: Point, delta: float) -> GromovReport:
    lhs = gromov_product(p, q, w)
    rhs = min(gromov_product(p, s, w), gromov_product(q, s, w))
    return GromovReport((p, q, s, w), lhs, rhs, delta)


def case1_family(eps=None, arms=(0.6, 0.75, 0.9)):
    """Same-quadrant quadruples with base at the origin approaching ``atanh(1/2)``.

    ``p = (e, a)`` and ``q = (a, e)`` with ``e -> 0``; ``s`` sits at the
    balancing point ``s1 = (1 + p1 - q2) / 2`` just inside the ideal edge.
    """
    if eps is None:
        eps = np.geomspace(1e-9, 0.2, 40)
    E, A = np.meshgrid(np.asarray(eps, dtype=float), np.asarray(arms, dtype=float))
    E, A = E.ravel(), A.ravel()
    keep = E + A < 1.0 - 1e-9
    E, A = E[keep], A[keep]
    P = np.column_stack([E, A])
    Q = np.column_stack([A, E])
    s1 = (1.0 + P[:, 0] - Q[:, 1]) / 2.0
    S = np.column_stack([s1, 1.0 - s1 - E / 2.0])
    W = np.zeros_like(P)
    return P, Q, S, W


def tightness_family(ts=None):
    """``s=(t,t), p=(-t,t), q=(t,-t), w=(-t,-t)``; needs ``delta = 2 atanh(t)``."""
    if ts is None:
        ts = np.r_[np.linspace(0.05, 0.4999, 50), 0.5 - np.geomspace(1e-4, 1e-9, 6)]
    t = np.asarray(ts, dtype=float)
    P = np.column_stack([-t, t])
    Q = np.column_stack([t, -t])
    S = np.column_stack([t, t])
    W = np.column_stack([-t, -t])
    return P, Q, S, W


def _finite_or_none(x: float):
    return x if math.isfinite(x) else None


@dataclass
class ScanReport:
    samples: int
    seed: int
    base_point: str
    max_required_delta: float
    argmax_quadruple: tuple
    random_max: float      # -inf when no random quadruples were drawn
    family_max: float      # -inf when the families were skipped

    def to_json(self) -> dict:
        return {
            "samples": self.samples,
            "seed": self.seed,
            "base_point": self.base_point,
            "max_required_delta": self.max_required_delta,
            "argmax_quadruple": [list(map(float, x)) for x in self.argmax_quadruple],
            "random_max": _finite_or_none(self.random_max),
            "family_max": _finite_or_none(self.family_max),
        }


def delta_scan(samples: int = 10**6, base_point: str = "theta", seed: int = 0,
               families: bool = True, chunk: int = 200_000) -> ScanReport:
    """Monte-Carlo maximum of the required ``delta`` over random quadruples.

    ``base_point="theta"`` fixes ``w`` at the origin; ``"random"`` draws it.
    Structured near-extremal families are mixed in unless ``families`` is off.
    """
    if base_point not in ("theta", "random"):
        raise ValueError("base_point must be 'theta' or 'random'")
    if samples < 0:
        raise ValueError("samples must be >= 0")
    rng = np.random.default_rng(seed)
    best = (-math.inf, None)
    random_max = -math.inf
    done = 0
    while done < samples:
        n = min(chunk, samples - done)
        P, Q, S = (sample_disk(rng, n) for _ in range(3))
        W = np.zeros_like(P) if base_point == "theta" else sample_disk(rng, n)
        req = required_delta_array(P, Q, S, W)
        k = int(np.argmax(req))
        random_max = max(random_max, float(req[k]))
        if req[k] > best[0]:
            best = (float(req[k]), (P[k], Q[k], S[k], W[k]))
        done += n
    family_max = -math.inf
    if families:
        fams = [case1_family()]
        if base_point == "random":
            fams.append(tightness_family())
        for P, Q, S, W in fams:
            req = required_delta_array(P, Q, S, W)
            k = int(np.argmax(req))
            family_max = max(family_max, float(req[k]))
            if req[k] > best[0]:
                best = (float(req[k]), (P[k], Q[k], S[k], W[k]))
    if best[1] is None:
        raise ValueError("nothing to scan: samples=0 and families disabled")
    return ScanReport(samples, seed, base_point, best[0], best[1], random_max, family_max)


# -- geodesic lines -------------------------------------------------------------

def ray_to_ideal(origin, direction) -> np.ndarray:
    """Where the ray ``origin + t * direction`` (t > 0) meets ``|x1| + |x2| = 1``."""
    o = np.asarray(origin, dtype=float)
    v = np.asarray(direction, dtype=float)
    if not v.any():
        raise LineError("zero direction")
    breaks = sorted({-o[k] / v[k] for k in range(2) if v[k] != 0 and -o[k] / v[k] > 0})
    lo = 0.0
    for hi in breaks + [math.inf]:
        mid = lo + 1.0 if math.isinf(hi) else 0.5 * (lo + hi)
        s = np.sign(o + mid * v)
        # on this interval the norm is linear: s.o + t s.v
        slope = float(s @ v)
        if slope > 0:
            t = (1.0 - float(s @ o)) / slope
            if lo - 1e-15 <= t <= hi:
                x = o + t * v
                # pin coordinates on the axis the ray travels along
                x[v == 0] = o[v == 0]
                return x
        lo = hi
    raise LineError("ray does not reach the ideal boundary")


@dataclass(frozen=True)
class GeodesicLine:
    ideal_a: tuple[float, float]
    corner: Optional[Point]
    ideal_b: tuple[float, float]

    @property
    def vertices(self) -> np.ndarray:
        pts = [self.ideal_a]
        if self.corner is not None:
            pts.append((self.corner.x1, self.corner.x2))
        pts.append(self.ideal_b)
        return np.array(pts, dtype=float)

    def segments(self):
        V = self.vertices
        return list(zip(V[:-1], V[1:]))

    def key(self, digits: int = 12) -> tuple:
        return tuple(round(float(v), digits) + 0.0 for v in self.vertices.ravel())

    def to_json(self) -> dict:
        return {
            "ideal_a": list(self.ideal_a),
            "corner": None if self.corner is None else [self.corner.x1, self.corner.x2],
            "ideal_b": list(self.ideal_b),
        }


def _antiparallel(u, v) -> bool:
    cross = u[0] * v[1] - u[1] * v[0]
    return abs(cross) <= 1e-15 * (np.abs(u).sum() * np.abs(v).sum()) and float(u @ v) < 0


def _inward(inner: np.ndarray, d: np.ndarray):
    """Follow ``inner + t d`` toward the axes; returns ``(corner or None, final direction, start)``.

    Past the first axis hit only the component crossing that axis is kept;
    continuing straight would leave the set of minimisers.
    """
    hits = {k: -inner[k] / d[k] for k in range(2) if d[k] != 0}
    t_star = min(hits.values())
    hit = [k for k, t in hits.items() if t == t_star]
    c = inner + t_star * d
    for k in hit:
        c[k] = 0.0
    if len(hit) == 2 or len(hits) == 1:
        return None, d, inner
    k = hit[0]
    e = np.zeros(2)
    e[k] = d[k]
    return c, e, c


def line_through(p: Point, q: Point) -> GeodesicLine:
    """The line extending the L-shaped curve from ``p`` to ``q``; ``ideal_a`` is on ``p``'s side."""
    if p == q:
        raise LineError("a line needs two distinct points")
    P, Q = np.array(p), np.array(q)
    m = minimal_point(p, q)
    M = np.array(m)
    if m != p and m != q:
        u, v = P - M, Q - M
        a, b = ray_to_ideal(M, u), ray_to_ideal(M, v)
        corner = None if _antiparallel(u, v) else m
        return GeodesicLine(tuple(a), corner, tuple(b))
    flip = m == p          # q beyond p
    outer, inner = (Q, P) if flip else (P, Q)
    w = outer - inner
    far = ray_to_ideal(inner, w)
    corner, e, start = _inward(inner, -w)
    near = ray_to_ideal(start, e)
    corner_pt = None if corner is None else Point(*corner)
    if flip:
        return GeodesicLine(tuple(near), corner_pt, tuple(far))
    return GeodesicLine(tuple(far), corner_pt, tuple(near))


def _point_segment_dist(x, a, b) -> float:
    d = b - a
    dd = float(d @ d)
    t = 0.0 if dd == 0 else min(1.0, max(0.0, float((x - a) @ d) / dd))
    return float(np.linalg.norm(x - (a + t * d)))


def distance_to_polyline(x, V) -> float:
    x = np.asarray(x, dtype=float)
    return min(_point_segment_dist(x, a, b) for a, b in zip(V[:-1], V[1:]))


def on_line(line: GeodesicLine, p, tol: float = 1e-12) -> bool:
    return distance_to_polyline(np.asarray(p, dtype=float), line.vertices) <= tol


def _cross(u, v) -> float:
    return float(u[0] * v[1] - u[1] * v[0])


def _segment_contacts(A, B, C, D, eps=1e-12):
    """Points shared by segments ``AB`` and ``CD`` (a crossing or overlap samples)."""
    r, s = B - A, D - C
    denom = _cross(r, s)
    scale = float(np.linalg.norm(r) * np.linalg.norm(s))
    if abs(denom) > eps * scale:
        t = _cross(C - A, s) / denom
        u = _cross(C - A, r) / denom
        if -eps <= t <= 1 + eps and -eps <= u <= 1 + eps:
            return [A + t * r]
        return []
    if abs(_cross(C - A, r)) > eps * float(np.linalg.norm(r)):
        return []
    rr = float(r @ r)
    t0, t1 = sorted((float((C - A) @ r) / rr, float((D - A) @ r) / rr))
    lo, hi = max(0.0, t0), min(1.0, t1)
    if lo > hi + eps:
        return []
    return [A + lo * r, A + hi * r, A + 0.5 * (lo + hi) * r]


def lines_intersect(l1: GeodesicLine, l2: GeodesicLine) -> bool:
    """True if the lines share a point of the open disk (ideal endpoints excluded)."""
    for A, B in l1.segments():
        for C, D in l2.segments():
            for x in _segment_contacts(A, B, C, D):
                if abs(x[0]) + abs(x[1]) < 1.0 - 1e-9:
                    return True
    return False


def _arclength(V):
    return np.r_[0.0, np.cumsum(np.linalg.norm(np.diff(V, axis=0), axis=1))]


def point_at(V, s_cum, s) -> np.ndarray:
    return np.array([np.interp(s, s_cum, V[:, k]) for k in range(2)])


def sample_pairs(line: GeodesicLine, n: int, rng: np.random.Generator,
                 max_norm: float = 0.999):
    """``n`` ordered pairs of arclength positions of interior points on ``line``."""
    V = line.vertices
    s_cum = _arclength(V)
    grid = np.linspace(0.0, s_cum[-1], 20001)[1:-1]
    pts = np.array([point_at(V, s_cum, s) for s in grid])
    ok = grid[np.abs(pts).sum(axis=1) <= max_norm]
    pairs = np.sort(rng.choice(ok, size=(n, 2)), axis=1)
    return V, s_cum, pairs


def subarc(V, s_cum, sa: float, sb: float) -> np.ndarray:
    inner = [V[k] for k in range(len(V)) if sa < s_cum[k] < sb]
    return np.array([point_at(V, s_cum, sa)] + inner + [point_at(V, s_cum, sb)])


def check_line(line: GeodesicLine, n: int = 100, seed: int = 0, tol: float = 1e-12) -> bool:
    """Sampled check that sub-arcs are doubly monotonic and pass through their minimal point."""
    rng = np.random.default_rng(seed)
    V, s_cum, pairs = sample_pairs(line, n, rng)
    for sa, sb in pairs:
        if sb - sa <= 0:
            continue
        arc = subarc(V, s_cum, sa, sb)
        for k in range(2):
            d = np.diff(arc[:, k])
            if not ((d >= -tol).all() or (d <= tol).all()):
                return False
        m = minimal_point_array(arc[0], arc[-1])
        if distance_to_polyline(m, arc) > tol:
            return False
    return True


def _sweep_targets(p: Point, resolution: int) -> np.ndarray:
    """Second points ``q`` whose lines ``Lambda(p, q)`` make up the sweep family."""
    k = max(4, resolution // 4)
    out = []
    for j, c in ((1, p.x1), (0, p.x2)):
        span = 1.0 - abs(c) - 1e-6
        free = np.linspace(-span, span, k)
        pts = np.empty((k, 2))
        pts[:, 1 - j] = c
        pts[:, j] = free
        out.append(pts)
    g = int(math.sqrt(resolution))
    u = np.linspace(-0.995, 0.995, g)
    U, Vv = np.meshgrid(u, u)
    out.append(np.column_stack([(U + Vv).ravel() / 2, (U - Vv).ravel() / 2]))
    return np.vstack(out)


def playfair_witnesses(line: GeodesicLine, p: Point, n: int, seed: int = 0,
                       resolution: int = 1000) -> list[GeodesicLine]:
    """``n`` distinct lines through ``p`` that miss ``line``.

    Sweeps ``Lambda(p, q)`` over second points on the coordinate lines
    through ``p`` and a lattice filling the disk; the seed picks which of the
    surviving lines are returned.
    """
    if on_line(line, p):
        raise LineError(f"{p} lies on the line")
    if n <= 0:
        return []
    found = {}
    for q in _sweep_targets(p, resolution):
        try:
            qp = Point(*q)
        except ValueError:
            continue
        if qp == p:
            continue
        cand = line_through(p, qp)
        if cand.key() in found or lines_intersect(cand, line):
            continue
        found[cand.key()] = cand
    if len(found) < n:
        raise WitnessShortfall(len(found), n)
    rng = np.random.default_rng(seed)
    keys = list(found)
    pick = rng.choice(len(keys), size=n, replace=False)
    return [found[keys[i]] for i in sorted(pick)]


def find_asymmetry_witness(p: Point, q: Point, tries: int = 400):
    """A point ``s`` on ``Lambda(p, q)`` with ``p`` not on ``Lambda(s, q)``, or ``None``."""
    line = line_through(p, q)
    V = line.vertices
    s_cum = _arclength(V)
    for s in np.linspace(0.0, s_cum[-1], tries)[1:-1]:
        x = point_at(V, s_cum, s)
        if abs(x[0]) + abs(x[1]) > 0.99:
            continue
        sp = Point(*x)
        if sp == q or sp == p:
            continue
        if not on_line(line_through(sp, q), p):
            return sp
    return None
