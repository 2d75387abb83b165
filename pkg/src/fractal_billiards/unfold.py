"""Unfolding orbits into straight lines, and folding them back.

Copies of a table are tracked as exact affine maps.  Folding uses the
reflection tiling generated by a convex tile (square or equilateral
triangle): a point is folded by reflecting it across violated walls of the
fundamental tile until it lands inside.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Optional, Sequence

from .billiard import GeometryError, Orbit, OrbitStatus, State, run_orbit
from .compat import lift_initial
from .exact import ONE, ZERO, Q, QSqrt3, Vec
from .tables import Table, tiling_polygon


@dataclass(frozen=True)
class DihedralData:
    angle_denominators: tuple[int, ...]
    N: int

    @property
    def copies(self) -> int:
        return 2 * self.N


def dihedral_of(table: Table) -> DihedralData:
    dens = tuple(sorted({v.angle.denominator for v in table.vertices.values()}))
    return DihedralData(dens, lcm(*dens))


@dataclass(frozen=True)
class ConePoint:
    vertex: Vec
    angle: Fraction  # interior angle / pi
    class_size: int  # copies glued around the point
    cone_angle: Fraction  # total angle / pi
    removable: bool


def cone_audit(table: Table) -> list[ConePoint]:
    """Cone angle of the surface point over each vertex.

    An angle p pi / q is surrounded by 2q copies once glued, so the cone
    angle is 2 p pi; the point is regular exactly when p = 1.
    """
    out = []
    for v in table.vertices.values():
        q = v.angle.denominator
        cone = v.angle * 2 * q
        out.append(ConePoint(v.point, v.angle, 2 * q, cone, cone == 2))
    return out


# -- affine maps ------------------------------------------------------------

@dataclass(frozen=True)
class Affine:
    a: QSqrt3
    b: QSqrt3
    c: QSqrt3
    d: QSqrt3
    shift: Vec

    @classmethod
    def identity(cls) -> "Affine":
        return cls(ONE, ZERO, ZERO, ONE, Vec(ZERO, ZERO))

    @classmethod
    def reflection(cls, point: Vec, direction: Vec) -> "Affine":
        """Reflection in the line through ``point`` along ``direction``."""
        n2 = direction.norm2()
        ux, uy = direction.x, direction.y
        a = (ux * ux - uy * uy) / n2
        b = (ux * uy + ux * uy) / n2
        lin = cls(a, b, b, -a, Vec(ZERO, ZERO))
        return cls(a, b, b, -a, point - lin.linear(point))

    @classmethod
    def point_reflection(cls, point: Vec) -> "Affine":
        m = -ONE
        return cls(m, ZERO, ZERO, m, point + point)

    def linear(self, v: Vec) -> Vec:
        return Vec(self.a * v.x + self.b * v.y, self.c * v.x + self.d * v.y)

    def __call__(self, p: Vec) -> Vec:
        return self.linear(p) + self.shift

    def compose(self, other: "Affine") -> "Affine":
        """self o other."""
        return Affine(self.a * other.a + self.b * other.c, self.a * other.b + self.b * other.d,
                      self.c * other.a + self.d * other.c, self.c * other.b + self.d * other.d,
                      self(other.shift))

    @property
    def det(self) -> QSqrt3:
        return self.a * self.d - self.b * self.c


@dataclass
class UnfoldedOrbit:
    copies: list[Affine]  # copy i carries the i-th chord into the plane
    segments: list[tuple[Vec, Vec]]
    line_point: Vec
    line_direction: Vec

    @property
    def n_copies(self) -> int:
        return len(self.copies)

    def is_collinear(self) -> bool:
        d = self.line_direction
        for p, q in self.segments:
            if (p - self.line_point).cross(d) or (q - self.line_point).cross(d):
                return False
        return all(self.segments[i][1] == self.segments[i + 1][0]
                   for i in range(len(self.segments) - 1))


def _corner_copy(table: Table, vertex_point: Vec) -> Affine:
    v = table.vertices[vertex_point]
    if v.angle.denominator == 2:
        return Affine.point_reflection(vertex_point)
    u1 = table.sides[v.outgoing].b - vertex_point
    u2 = table.sides[v.incoming].a - vertex_point
    w = u1 + u2  # bisector; the tables here have equal sides at every acute corner
    if u1.norm2() != u2.norm2():
        raise GeometryError("unequal sides at an acute corner")
    return Affine.reflection(vertex_point, Vec(-w.y, w.x))


def unfold_orbit(table: Table, orbit: Orbit, steps: Optional[int] = None) -> UnfoldedOrbit:
    """Reflect the table across each hit side so the orbit becomes one segment."""
    if orbit.status is not OrbitStatus.PERIODIC and steps is None:
        raise GeometryError("only periodic orbits unfold over a full period")
    entries = orbit.entries
    n = orbit.period if steps is None else steps
    pts = [e.point for e in entries] + [entries[0].point]
    if n > len(pts) - 1:
        raise ValueError("not enough orbit entries for the requested span")
    copies = [Affine.identity()]
    segs = []
    for i in range(n):
        g = copies[-1]
        segs.append((g(pts[i]), g(pts[i + 1])))
        if i == n - 1:
            break
        e = entries[i + 1]
        if e.side is not None:
            s = table.sides[e.side]
            step = Affine.reflection(s.a, s.direction)
        else:
            step = _corner_copy(table, e.point)
        copies.append(g.compose(step))
    return UnfoldedOrbit(copies, segs, pts[0], orbit.init.direction)


# -- folding and reflected unfolding -------------------------------------------

def _walls(tile: Sequence[Vec]) -> list[tuple[Vec, Vec]]:
    """(point, inward normal) of each edge of a ccw convex tile."""
    out = []
    for i in range(len(tile)):
        a, b = tile[i], tile[(i + 1) % len(tile)]
        e = b - a
        out.append((a, Vec(-e.y, e.x)))
    return out


def fold_point(tile: Sequence[Vec], p: Vec, max_steps: int = 100000) -> tuple[Vec, Affine]:
    """Fold p into the tile; return the image and the folding map used."""
    g = Affine.identity()
    q = p
    walls = _walls(tile)
    for _ in range(max_steps):
        for a, nrm in walls:
            if (q - a).dot(nrm).sign() < 0:
                r = Affine.reflection(a, Vec(nrm.y, -nrm.x))
                q = r(q)
                g = r.compose(g)
                break
        else:
            return q, g
    raise GeometryError("folding did not terminate")


def _line_families(tile: Sequence[Vec]) -> list[tuple[Vec, Vec, Vec]]:
    """(normal, origin, step) per family of tiling lines: lines n.x = n.(origin + k step)."""
    fams = []
    seen = []
    for a, nrm in _walls(tile):
        if any(not nrm.cross(s) for s in seen):
            continue
        seen.append(nrm)
        # lines of one family are one tile-height apart
        far = max(tile, key=lambda v: float((v - a).dot(nrm)))
        fams.append((nrm, a, far - a))
    return fams


def _floor_ratio(x: QSqrt3, y: QSqrt3) -> int:
    r = x / y
    if r.is_rational:
        return math.floor(r.to_fraction())
    k = math.floor(float(r))
    while Q(k) > r:
        k -= 1
    while Q(k + 1) <= r:
        k += 1
    return k


def _crossings(tile, p: Vec, q: Vec) -> list[QSqrt3]:
    """Parameters t in (0, 1) where p + t(q - p) meets a tiling line."""
    ts = set()
    for nrm, origin, step in _line_families(tile):
        c = step.dot(nrm)
        u0 = (p - origin).dot(nrm)
        u1 = (q - origin).dot(nrm)
        du = u1 - u0
        if not du:
            continue
        lo, hi = (u0, u1) if u0 < u1 else (u1, u0)
        k = _floor_ratio(lo, c) + 1
        while Q(k) * c < hi:
            ts.add((Q(k) * c - u0) / du)
            k += 1
    return sorted(ts)


def fold_orbit(big: Table, orbit: Orbit, small: Table, steps: Optional[int] = None) -> list[State]:
    """Image of a big-table orbit in the small fundamental tile.

    Each chord of the big orbit is cut where it crosses the tiling; every
    piece is folded by the map of the tile it lies in.  The result lists the
    small-table states (basepoint, outgoing direction) in order.
    """
    tile = list(small.boundary)
    entries = orbit.entries
    n = orbit.period if steps is None and orbit.is_periodic else (steps or len(entries) - 1)
    pts = [e.point for e in entries] + ([entries[0].point] if orbit.is_periodic else [])
    states: list[State] = []
    for i in range(n):
        p, q = pts[i], pts[i + 1]
        d = entries[i].outgoing
        cuts = [ZERO] + _crossings(tile, p, q) + [ONE]
        for j in range(len(cuts) - 1):
            start = p + (q - p).scale(cuts[j])
            mid = p + (q - p).scale((cuts[j] + cuts[j + 1]) * Q(Fraction(1, 2)))
            _, g = fold_point(tile, mid)
            states.append(State(g(start), g.linear(d)))
    return states


def reflect_unfold(small: Table, orbit: Orbit, big: Table, max_bounces: int = 5000) -> Orbit:
    """Continue the small orbit's straight-line unfolding inside ``big``.

    ``small`` must be a tile of the reflection tiling that also tiles
    ``big``.  The big orbit starts from the same initial condition (moved
    back along the ray when the basepoint is inside ``big``).
    """
    init = lift_initial(orbit.init, big)
    return run_orbit(big, init, max_bounces)


def repeats(small_orbit: Orbit, folded: Sequence[State], s: int) -> bool:
    """Do the first s*p folded states trace the small orbit s times?"""
    base = small_orbit.states[:small_orbit.period]
    want = base * s
    return len(folded) >= len(want) and list(folded[:len(want)]) == want


def tile_for(table: Table) -> tuple[Vec, ...]:
    return tiling_polygon(table)
