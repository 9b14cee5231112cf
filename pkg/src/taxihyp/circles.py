"""Metric circles ``C_r(p)`` and the nine-region decomposition around a centre.

All region work happens in *local* coordinates ``y = s * x`` where ``s`` is
the sign vector of the centre (``+1`` for a zero coordinate), so the centre
sits at ``(a1, a2) = (|p1|, |p2|)`` in the closed first quadrant.  Per
coordinate a point is ``beyond`` (``y > a``), ``between`` (``0 < y < a``) or
``opposite`` (``y < 0``); the pair of categories names the region.

On quadrants and the central rectangle the minimal point ``m(p, x)`` is a
fixed corner, so the circle is a segment of slope +-1 there.  In the strips
``m`` moves with ``x`` and the circle is the graph of

    F(s) = (k (1 + s^2) + 2 s) / (1 + s^2 + 2 k s),   k = tanh(r - r_p),

which is ``tanh(r - r_p + 2 atanh(s))``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .metric import Point, distance, distance_array, lies_beyond, radius_of


class Region(str, enum.Enum):
    Q_THETA = "Q_theta"
    Q_P = "Q_p"
    Q_C1 = "Q_c1"
    Q_C2 = "Q_c2"
    R = "R"
    S_THETA_C1 = "S_theta_c1"
    S_THETA_C2 = "S_theta_c2"
    S_P_C1 = "S_p_c1"
    S_P_C2 = "S_p_c2"


QUADRANTS = (Region.Q_THETA, Region.Q_P, Region.Q_C1, Region.Q_C2)
STRIPS = (Region.S_THETA_C1, Region.S_THETA_C2, Region.S_P_C1, Region.S_P_C2)

BEYOND, BETWEEN, OPPOSITE = "beyond", "between", "opposite"

_LAYOUT = {
    (BEYOND, BEYOND): Region.Q_P,
    (BETWEEN, BETWEEN): Region.R,
    (OPPOSITE, OPPOSITE): Region.Q_THETA,
    (BEYOND, OPPOSITE): Region.Q_C1,
    (OPPOSITE, BEYOND): Region.Q_C2,
    (BEYOND, BETWEEN): Region.S_P_C1,
    (BETWEEN, BEYOND): Region.S_P_C2,
    (BETWEEN, OPPOSITE): Region.S_THETA_C1,
    (OPPOSITE, BETWEEN): Region.S_THETA_C2,
}
_CATEGORIES = {region: cats for cats, region in _LAYOUT.items()}


class CircleError(ValueError):
    pass


@dataclass(frozen=True)
class RegionDecomposition:
    center: Point

    @property
    def signs(self) -> np.ndarray:
        return np.array([-1.0 if self.center.x1 < 0 else 1.0,
                         -1.0 if self.center.x2 < 0 else 1.0])

    @property
    def corner(self) -> np.ndarray:
        """``(|p1|, |p2|)``."""
        return np.array([abs(self.center.x1), abs(self.center.x2)])

    @property
    def c1(self) -> Point:
        return Point(self.center.x1, 0.0)

    @property
    def c2(self) -> Point:
        return Point(0.0, self.center.x2)

    def to_local(self, X) -> np.ndarray:
        return np.asarray(X, dtype=float) * self.signs

    def to_global(self, Y) -> np.ndarray:
        return np.asarray(Y, dtype=float) * self.signs

    def is_empty(self, region: Region) -> bool:
        a = self.corner
        return any(cat == BETWEEN and a[k] == 0.0
                   for k, cat in enumerate(_CATEGORIES[Region(region)]))

    def interval(self, region: Region, k: int) -> tuple[float, float]:
        """Open range of local coordinate ``k`` inside ``region`` (ignoring the disk)."""
        cat = _CATEGORIES[Region(region)][k]
        a = self.corner[k]
        return {BEYOND: (a, 1.0), BETWEEN: (0.0, a), OPPOSITE: (-1.0, 0.0)}[cat]

    def region_of(self, x) -> Region | None:
        """Open region containing ``x``; ``None`` on one of the four dividing lines."""
        y = self.to_local(np.asarray(x, dtype=float))
        cats = []
        for k in range(2):
            a = self.corner[k]
            if y[k] == 0.0 or y[k] == a:
                return None
            cats.append(BEYOND if y[k] > a else (BETWEEN if y[k] > 0 else OPPOSITE))
        return _LAYOUT[tuple(cats)]

    def contains(self, region: Region, x) -> bool:
        return self.region_of(x) is Region(region)

    def minimal_corner(self, region: Region) -> Point:
        """The fixed minimal point ``m(p, x)`` for ``x`` in a quadrant or ``None`` for R."""
        return {
            Region.Q_P: self.center,
            Region.Q_THETA: Point(0.0, 0.0),
            Region.Q_C1: self.c1,
            Region.Q_C2: self.c2,
        }[Region(region)]


def decompose(p: Point) -> RegionDecomposition:
    return RegionDecomposition(p)


@dataclass(frozen=True)
class CircleSpec:
    center: Point
    radius: float

    def __post_init__(self):
        if not (self.radius > 0 and math.isfinite(self.radius)):
            raise CircleError(f"radius must be positive and finite, got {self.radius}")

    @property
    def kappa(self) -> float:
        return math.tanh(self.radius - radius_of(self.center))

    @property
    def regions(self) -> RegionDecomposition:
        return RegionDecomposition(self.center)


def circle_membership(spec: CircleSpec, x: Point) -> float:
    """Signed offset ``d(center, x) - radius``; zero exactly on the circle."""
    return distance(spec.center, x) - spec.radius


def membership_array(spec: CircleSpec, X) -> np.ndarray:
    return distance_array(np.asarray(spec.center), X) - spec.radius


def intersects_region(spec: CircleSpec, region: Region) -> bool:
    region = Region(region)
    dec = spec.regions
    if dec.is_empty(region):
        return False
    r, p = spec.radius, spec.center
    if region in (Region.Q_P, Region.S_P_C1, Region.S_P_C2):
        return True
    if region is Region.R:
        return r < radius_of(p)
    if region is Region.Q_THETA:
        return r > radius_of(p)
    if region in (Region.Q_C1, Region.S_THETA_C1):
        return r > distance(p, dec.c1)
    return r > distance(p, dec.c2)


def quadrant_piece_radius(spec: CircleSpec, region: Region) -> float:
    """Origin-centred radius carrying the circle's segment in a quadrant or R."""
    region = Region(region)
    if region in STRIPS:
        raise CircleError(f"{region.value} is a strip, not a quadrant or R")
    if not intersects_region(spec, region):
        raise CircleError(f"circle does not meet {region.value}")
    r_p = radius_of(spec.center)
    if region is Region.R:
        return r_p - spec.radius
    m = spec.regions.minimal_corner(region)
    return spec.radius + 2.0 * radius_of(m) - r_p


def strip_curve(kappa: float, s):
    """``tanh(r - r_p + 2 atanh(s))`` written with ``kappa = tanh(r - r_p)``."""
    s = np.asarray(s, dtype=float)
    s2 = 1.0 + s * s
    return (kappa * s2 + 2.0 * s) / (s2 + 2.0 * kappa * s)


# Strip geometry in local coordinates: which coordinate is free, how the
# dependent one follows from the free one, and the bound it must exceed.
def _strip_local(dec: RegionDecomposition, kappa: float, region: Region, free):
    a1, a2 = dec.corner
    free = np.asarray(free, dtype=float)
    if region is Region.S_P_C1:      # free y2 in (0, a2); y1 > a1
        dep = strip_curve(kappa, a1 + free) - free
        return np.column_stack([dep, free]), dep - a1
    if region is Region.S_P_C2:      # free y1 in (0, a1); y2 > a2
        dep = strip_curve(kappa, free + a2) - free
        return np.column_stack([free, dep]), dep - a2
    if region is Region.S_THETA_C1:  # free y1 in (0, a1); y2 < 0
        dep = strip_curve(kappa, free) - free
        return np.column_stack([free, -dep]), dep
    if region is Region.S_THETA_C2:  # free y2 in (0, a2); y1 < 0
        dep = strip_curve(kappa, free) - free
        return np.column_stack([-dep, free]), dep
    raise CircleError(f"{region} is not a strip")


_FREE_AXIS = {Region.S_P_C1: 1, Region.S_P_C2: 0, Region.S_THETA_C1: 0, Region.S_THETA_C2: 1}


def strip_arc(spec: CircleSpec, region: Region, samples: int = 256,
              iterations: int = 80) -> np.ndarray:
    """Sample the circle inside a strip as an ``(n, 2)`` array in global coordinates.

    The free coordinate runs over the part of the strip where the formula
    lands inside the region; that end is located by bisection on the sign of
    the offset from the bounding line, so the arc meets the neighbouring
    admissible segment.
    """
    region = Region(region)
    dec = spec.regions
    kappa = spec.kappa
    lo, hi = dec.interval(region, _FREE_AXIS[region])

    def slack(t):
        return float(_strip_local(dec, kappa, region, [t])[1][0])

    # the valid set is an interval adjacent to ``hi``
    if slack(hi) <= 0:
        return np.empty((0, 2))
    if slack(lo) < 0:
        a, b = lo, hi
        for _ in range(iterations):
            mid = 0.5 * (a + b)
            if slack(mid) < 0:
                a = mid
            else:
                b = mid
        lo = b
    free = np.linspace(lo, hi, samples)
    pts, _ = _strip_local(dec, kappa, region, free)
    return dec.to_global(pts)


def admissible_segment(spec: CircleSpec, region: Region) -> np.ndarray:
    """Endpoints ``(2, 2)`` of the circle's straight piece in a quadrant or R."""
    region = Region(region)
    dec = spec.regions
    a1, a2 = dec.corner
    T = math.tanh(quadrant_piece_radius(spec, region))
    if region is Region.Q_P:
        ends = [(a1, T - a1), (T - a2, a2)]
    elif region is Region.Q_THETA:
        ends = [(0.0, -T), (-T, 0.0)]
    elif region is Region.Q_C1:
        ends = [(a1, a1 - T), (T, 0.0)]
    elif region is Region.Q_C2:
        ends = [(a2 - T, a2), (0.0, T)]
    else:
        ends = [(max(0.0, T - a2), T - max(0.0, T - a2)),
                (min(a1, T), T - min(a1, T))]
    return dec.to_global(np.array(ends, dtype=float))


@dataclass(frozen=True)
class BoundaryPiece:
    region: Region
    kind: str              # "segment" or "arc"
    points: np.ndarray     # (n, 2) samples in order


@dataclass(frozen=True)
class CircleBoundary:
    spec: CircleSpec
    pieces: tuple[BoundaryPiece, ...]

    def points(self) -> np.ndarray:
        if not self.pieces:
            return np.empty((0, 2))
        return np.vstack([pc.points for pc in self.pieces])


def boundary(spec: CircleSpec, samples_per_piece: int = 256) -> CircleBoundary:
    if samples_per_piece < 2:
        raise CircleError("samples_per_piece must be >= 2")
    pieces = []
    for region in Region:
        if not intersects_region(spec, region):
            continue
        if region in STRIPS:
            pts = strip_arc(spec, region, samples_per_piece)
            if len(pts):
                pieces.append(BoundaryPiece(region, "arc", pts))
        else:
            ends = admissible_segment(spec, region)
            t = np.linspace(0.0, 1.0, samples_per_piece)[:, None]
            pieces.append(BoundaryPiece(region, "segment", ends[0] + t * (ends[1] - ends[0])))
    return CircleBoundary(spec, tuple(pieces))


def probe_region(spec: CircleSpec, region: Region, resolution: int = 40) -> bool:
    """Decide by sampling whether the circle meets ``region``.

    Samples a product grid of the region's coordinate ranges, refined
    geometrically toward both ends of each range, plus copies of every grid
    point pushed toward the ideal boundary.  The circle meets the region
    when the membership offset takes both signs on these samples.
    """
    region = Region(region)
    dec = spec.regions
    if dec.is_empty(region):
        return False
    axes = []
    for k in range(2):
        lo, hi = dec.interval(region, k)
        geo = np.geomspace(1e-13, 0.5, resolution) * (hi - lo)
        axes.append(np.unique(np.r_[lo + geo, hi - geo, np.linspace(lo, hi, resolution)[1:-1]]))
    Y = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, 2)
    extra = []
    for k in range(2):
        if _CATEGORIES[region][k] == BETWEEN:
            continue
        for eps in (1e-10, 1e-6, 1e-3, 1e-1):
            Z = Y.copy()
            Z[:, k] = np.sign(Z[:, k]) * (1.0 - np.abs(Z[:, 1 - k]) - eps)
            extra.append(Z)
    Y = np.vstack([Y] + extra)
    Y = Y[_in_region(dec, region, Y) & (np.abs(Y[:, 0]) + np.abs(Y[:, 1]) < 1.0 - 1e-12)]
    if not len(Y):
        return False
    vals = membership_array(spec, dec.to_global(Y))
    return bool((vals == 0).any() or ((vals < 0).any() and (vals > 0).any()))


def _in_region(dec: RegionDecomposition, region: Region, Y: np.ndarray) -> np.ndarray:
    ok = np.ones(len(Y), dtype=bool)
    for k in range(2):
        lo, hi = dec.interval(region, k)
        ok &= (Y[:, k] > lo) & (Y[:, k] < hi)
    return ok


def reflect_across_normal(spec: CircleSpec, X) -> np.ndarray:
    """Reflect points across the line through the centre perpendicular to its quadrant's ideal edge."""
    dec = spec.regions
    Y = dec.to_local(X)
    a = dec.corner
    Z = np.column_stack([Y[:, 1] - a[1] + a[0], Y[:, 0] - a[0] + a[1]])
    return dec.to_global(Z)


def _half_plane(p: Point, q: Point):
    """Index of the non-shared coordinate, its sign, and the bound ``|q_j|``."""
    j = 0 if p.x2 == q.x2 else 1
    pj = (p.x1, p.x2)[j]
    return j, (1.0 if pj > 0 else -1.0), abs((q.x1, q.x2)[j])


def shared_edge_check(p: Point, q: Point, r: float, samples: int = 256,
                      tol: float = 1e-9) -> bool:
    """Check that ``C_r(p)`` and ``C_{r - d(p,q)}(q)`` agree on the far half-plane.

    ``p`` and ``q`` share a coordinate line, with ``p`` beyond ``q``.  The
    half-plane is bounded by the other coordinate line through ``q`` and
    excludes ``p``.
    """
    if p == q:
        raise CircleError("p and q must differ")
    if p.x1 != q.x1 and p.x2 != q.x2:
        raise CircleError("p and q must share a coordinate line")
    if not lies_beyond(p, q):
        raise CircleError("p must lie beyond q")
    dpq = distance(p, q)
    if not r > dpq:
        raise CircleError(f"radius {r} must exceed d(p, q) = {dpq}")
    big = CircleSpec(p, r)
    small = CircleSpec(q, r - dpq)
    j, sj, bound = _half_plane(p, q)

    def in_h(X):
        return sj * X[:, j] <= bound

    checked = 0
    for this, other in ((big, small), (small, big)):
        X = boundary(this, samples).points()
        X = X[in_h(X) & (np.abs(X).sum(axis=1) < 1.0)]
        checked += len(X)
        if len(X) and np.abs(membership_array(other, X)).max() >= tol:
            return False
    return checked > 0
