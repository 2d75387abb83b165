"""Prefractal billiard tables as exact polygons.

Three families are built level by level: the Koch snowflake KS_n, the
T-fractal T_n and the self-similar Sierpinski carpet S_{a,n}.  Plain
squares and equilateral triangles of any rational size are also available,
mostly as the small tiles used for unfolding.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from math import lcm
from typing import Iterable, Optional, Sequence

import numpy as np

from .exact import (ONE, SQRT3, ZERO, Q, QSqrt3, Vec, parallel_same_way,
                    point_on_segment, rotate, segment_param)
from . import ternary


class Family(str, Enum):
    KOCH = "koch"
    TFRACTAL = "t"
    CARPET = "carpet"
    SQUARE = "square"
    TRIANGLE = "triangle"


class PointClass(str, Enum):
    CORNER = "Corner"
    CANTOR_POINT = "CantorPoint"
    SMOOTH_FRACTAL_POINT = "SmoothFractalPoint"
    NON_PERSISTENT = "NonPersistent"
    NOT_ON_BOUNDARY = "NotOnBoundary"


HALF = Q(Fraction(1, 2))

# cos and sin of k*pi/6, k = 0..11
_TRIG = []
for _k in range(12):
    _c = [ONE, SQRT3 * HALF, HALF, ZERO, -HALF, -(SQRT3 * HALF),
          -ONE, -(SQRT3 * HALF), -HALF, ZERO, HALF, SQRT3 * HALF][_k]
    _s = [ZERO, HALF, SQRT3 * HALF, ONE, SQRT3 * HALF, HALF,
          ZERO, -HALF, -(SQRT3 * HALF), -ONE, -(SQRT3 * HALF), -HALF][_k]
    _TRIG.append((_c, _s))


def trig_pi_over_6(k: int) -> tuple[QSqrt3, QSqrt3]:
    return _TRIG[k % 12]


def turn_angle(e1: Vec, e2: Vec) -> Fraction:
    """Signed turn from e1 to e2 as a multiple of pi, in (-1, 1].

    Only multiples of pi/6 occur in the supported tables; anything else is
    rejected rather than approximated.
    """
    for k in range(-5, 7):
        c, s = trig_pi_over_6(k)
        if parallel_same_way(rotate(e1, c, s), e2):
            return Fraction(k, 6)
    raise ValueError("turn angle is not a multiple of pi/6")


@dataclass(frozen=True)
class Side:
    index: int
    a: Vec
    b: Vec
    ring: int  # 0 is the outer boundary, k >= 1 the k-th obstacle

    @property
    def direction(self) -> Vec:
        return self.b - self.a


@dataclass(frozen=True)
class VertexInfo:
    point: Vec
    angle: Fraction  # interior angle (domain side) as a multiple of pi
    incoming: int  # side ending here
    outgoing: int  # side starting here

    @property
    def removable(self) -> bool:
        # a cone point of the unfolded surface is regular iff 2N copies of
        # this angle add up to 2 pi, i.e. the angle is pi / integer
        return self.angle.numerator == 1


@dataclass
class Table:
    family: Family
    level: int
    boundary: tuple[Vec, ...]
    obstacles: tuple[tuple[Vec, ...], ...] = ()
    carpet_a: Optional[int] = None
    cell_scale: Fraction = Fraction(1)
    sides: list[Side] = field(init=False, repr=False)
    vertices: dict[Vec, VertexInfo] = field(init=False, repr=False)
    segment_floats: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        self.sides = []
        self.vertices = {}
        rings = [self.boundary] + list(self.obstacles)
        for r, ring in enumerate(rings):
            start = len(self.sides)
            n = len(ring)
            for i in range(n):
                self.sides.append(Side(len(self.sides), ring[i], ring[(i + 1) % n], r))
            for i in range(n):
                s_in = self.sides[start + (i - 1) % n]
                s_out = self.sides[start + i]
                turn = turn_angle(s_in.direction, s_out.direction)
                v = ring[i]
                if v in self.vertices:
                    raise ValueError(f"vertex {v} repeated; polygon not simple")
                self.vertices[v] = VertexInfo(v, 1 - turn, s_in.index, s_out.index)
        self.segment_floats = np.ascontiguousarray(np.array(
            [[float(s.a.x), float(s.a.y), float(s.b.x), float(s.b.y)] for s in self.sides],
            dtype=np.float64).reshape(-1, 4))

    # -- measurements ----------------------------------------------------
    @property
    def n_sides(self) -> int:
        return len(self.sides)

    def boundary_sides(self) -> list[Side]:
        return [s for s in self.sides if s.ring == 0]

    def perimeter(self) -> QSqrt3:
        """Length of the outer boundary (exact; side lengths must be rational)."""
        total = ZERO
        for s in self.boundary_sides():
            ln = s.direction.norm2().sqrt_if_rational_square()
            if ln is None:
                raise ValueError("side length is not rational")
            total = total + ln
        return total

    def area(self) -> QSqrt3:
        """Area of the billiard domain (outer polygon minus obstacles)."""
        total = ZERO
        for ring in [self.boundary] + list(self.obstacles):
            n = len(ring)
            acc = ZERO
            for i in range(n):
                acc = acc + ring[i].cross(ring[(i + 1) % n])
            total = total + acc * HALF
        return total

    def height(self) -> QSqrt3:
        ys = [p.y for p in self.boundary]
        return max(ys) - min(ys)

    def angle_set(self) -> set[Fraction]:
        return {v.angle for v in self.vertices.values()}

    # -- incidence -------------------------------------------------------
    def sides_through(self, p: Vec) -> list[Side]:
        return [s for s in self.sides if point_on_segment(p, s.a, s.b)]

    def on_boundary(self, p: Vec) -> bool:
        return bool(self.sides_through(p))

    def is_vertex(self, p: Vec) -> bool:
        return p in self.vertices

    def side_param(self, p: Vec, side: Side) -> QSqrt3:
        return segment_param(p, side.a, side.b)

    def contains(self, p: Vec) -> bool:
        """Closed-domain membership by exact crossing count."""
        if self.on_boundary(p):
            return True
        inside = _ring_contains(self.boundary, p)
        return inside and not any(_ring_contains(o, p) for o in self.obstacles)

    def bbox(self) -> tuple[float, float, float, float]:
        xs = self.segment_floats[:, [0, 2]]
        ys = self.segment_floats[:, [1, 3]]
        return float(xs.min()), float(ys.min()), float(xs.max()), float(ys.max())


def _ring_contains(ring: Sequence[Vec], p: Vec) -> bool:
    inside = False
    n = len(ring)
    for i in range(n):
        a, b = ring[i], ring[(i + 1) % n]
        if (a.y > p.y) != (b.y > p.y):
            # x-coordinate of the crossing compared exactly
            lhs = (p.x - a.x) * (b.y - a.y)
            rhs = (b.x - a.x) * (p.y - a.y)
            if (b.y - a.y).sign() > 0:
                if lhs < rhs:
                    inside = not inside
            elif lhs > rhs:
                inside = not inside
    return inside


def _clean_ring(points: Iterable[Vec]) -> tuple[Vec, ...]:
    pts: list[Vec] = []
    for p in points:
        if not pts or pts[-1] != p:
            pts.append(p)
    if len(pts) > 1 and pts[0] == pts[-1]:
        pts.pop()
    changed = True
    while changed:
        changed = False
        n = len(pts)
        for i in range(n):
            a, b, c = pts[i - 1], pts[i], pts[(i + 1) % n]
            if not (b - a).cross(c - b) and (b - a).dot(c - b).sign() > 0:
                del pts[i]
                changed = True
                break
    return tuple(pts)


# -- Koch snowflake --------------------------------------------------------

def _koch_refine(ring: Sequence[Vec]) -> list[Vec]:
    c, s = trig_pi_over_6(-2)  # rotate by -pi/3: bumps point outward on a ccw ring
    third = Q(Fraction(1, 3))
    out: list[Vec] = []
    n = len(ring)
    for i in range(n):
        p, q = ring[i], ring[(i + 1) % n]
        v = (q - p).scale(third)
        p1 = p + v
        out.extend([p, p1, p1 + rotate(v, c, s), p1 + v])
    return out


@lru_cache(maxsize=None)
def build_koch_snowflake(n: int) -> Table:
    """KS_n: unit equilateral base on the x-axis, left corner at the origin."""
    if n < 0:
        raise ValueError("level must be >= 0")
    ring = [Vec(ZERO, ZERO), Vec(ONE, ZERO), Vec(HALF, SQRT3 * HALF)]
    for _ in range(n):
        ring = _koch_refine(ring)
    return Table(Family.KOCH, n, tuple(ring), cell_scale=Fraction(1, 3 ** n))


# -- T-fractal -------------------------------------------------------------

def _t_path(c: Fraction, y0: Fraction, s: Fraction, depth: int) -> list[tuple[Fraction, Fraction]]:
    # boundary of one T copy from its stem's bottom-right corner, counterclockwise,
    # to its stem's bottom-left corner; children sit flush on the crossbar ends
    y1 = y0 + 3 * s
    pts = [(c + s, y0), (c + s, y0 + 2 * s), (c + 2 * s, y0 + 2 * s)]
    if depth == 0:
        pts += [(c + 2 * s, y1), (c - 2 * s, y1)]
    else:
        h = s / 2
        pts += _t_path(c + 3 * h, y1, h, depth - 1)
        pts += _t_path(c - 3 * h, y1, h, depth - 1)
    pts += [(c - 2 * s, y0 + 2 * s), (c - s, y0 + 2 * s), (c - s, y0)]
    return pts


@lru_cache(maxsize=None)
def build_t_fractal(n: int) -> Table:
    """T_n with the base [0, 2] x {0}.

    T_0 is a 2 x 2 stem under a 4 x 1 crossbar (eight unit squares, height 3).
    Each level puts a half-size copy on both ends of every newest crossbar.
    """
    if n < 0:
        raise ValueError("level must be >= 0")
    raw = _t_path(Fraction(1), Fraction(0), Fraction(1), n)
    ring = _clean_ring(Vec(Q(x), Q(y)) for x, y in raw)
    return Table(Family.TFRACTAL, n, ring, cell_scale=Fraction(1, 2 ** n))


@dataclass(frozen=True)
class TCopy:
    level: int
    center: Fraction
    base: Fraction
    scale: Fraction

    @property
    def attach_regions(self) -> tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]]:
        """x-intervals on the crossbar top where the next level attaches."""
        c, s = self.center, self.scale
        return (c - 2 * s, c - s), (c + s, c + 2 * s)

    @property
    def top(self) -> Fraction:
        return self.base + 3 * self.scale


def t_copies(n: int) -> list[TCopy]:
    out = [TCopy(0, Fraction(1), Fraction(0), Fraction(1))]
    frontier = out[:]
    for lvl in range(1, n + 1):
        nxt = []
        for cp in frontier:
            h = cp.scale / 2
            for sgn in (1, -1):
                nxt.append(TCopy(lvl, cp.center + sgn * 3 * h, cp.top, h))
        out += nxt
        frontier = nxt
    return out


# -- Sierpinski carpets ----------------------------------------------------

def _check_carpet_a(a: int) -> None:
    if not isinstance(a, int) or a < 3 or a % 2 == 0:
        raise ValueError(f"carpet parameter must be an odd integer >= 3, got {a!r}")


@dataclass(frozen=True)
class PeripheralSquare:
    level: int
    x0: Fraction
    y0: Fraction
    side: Fraction

    def corners(self) -> tuple[tuple[Fraction, Fraction], ...]:
        x0, y0, h = self.x0, self.y0, self.side
        return ((x0, y0), (x0 + h, y0), (x0 + h, y0 + h), (x0, y0 + h))


def carpet_cells(a: int, n: int) -> list[tuple[Fraction, Fraction]]:
    """Lower-left corners of the retained cells of side a^-n."""
    _check_carpet_a(a)
    cells = [(Fraction(0), Fraction(0))]
    k = (a - 1) // 2
    for lvl in range(1, n + 1):
        h = Fraction(1, a ** lvl)
        cells = [(x + i * h, y + j * h) for x, y in cells
                 for i in range(a) for j in range(a) if not (i == k and j == k)]
    return cells


def peripheral_squares(a: int, n: int) -> list[PeripheralSquare]:
    _check_carpet_a(a)
    k = (a - 1) // 2
    out = []
    cells = [(Fraction(0), Fraction(0))]
    for lvl in range(1, n + 1):
        h = Fraction(1, a ** lvl)
        out += [PeripheralSquare(lvl, x + k * h, y + k * h, h) for x, y in cells]
        cells = [(x + i * h, y + j * h) for x, y in cells
                 for i in range(a) for j in range(a) if not (i == k and j == k)]
    return out


def _square_ring(x0, y0, h, clockwise=False) -> tuple[Vec, ...]:
    pts = [(x0, y0), (x0 + h, y0), (x0 + h, y0 + h), (x0, y0 + h)]
    if clockwise:
        pts = [pts[0], pts[3], pts[2], pts[1]]
    return tuple(Vec(Q(x), Q(y)) for x, y in pts)


@lru_cache(maxsize=None)
def build_carpet(a: int, n: int) -> Table:
    """S_{a,n}: the unit square with every peripheral square up to level n."""
    _check_carpet_a(a)
    if n < 0:
        raise ValueError("level must be >= 0")
    obstacles = tuple(_square_ring(sq.x0, sq.y0, sq.side, clockwise=True)
                      for sq in peripheral_squares(a, n))
    return Table(Family.CARPET, n, _square_ring(Fraction(0), Fraction(0), Fraction(1)),
                 obstacles, carpet_a=a, cell_scale=Fraction(1, a ** n))


# -- plain tiles -----------------------------------------------------------

@lru_cache(maxsize=None)
def build_square(side=Fraction(1)) -> Table:
    side = Fraction(side)
    return Table(Family.SQUARE, 0, _square_ring(Fraction(0), Fraction(0), side),
                 cell_scale=side)


@lru_cache(maxsize=None)
def build_triangle(side=Fraction(1)) -> Table:
    s = Q(Fraction(side))
    ring = (Vec(ZERO, ZERO), Vec(s, ZERO), Vec(s * HALF, s * SQRT3 * HALF))
    return Table(Family.TRIANGLE, 0, ring, cell_scale=Fraction(side))


def build_table(family: str | Family, level: int = 0, a: Optional[int] = None) -> Table:
    fam = Family(family)
    if fam is Family.KOCH:
        return build_koch_snowflake(level)
    if fam is Family.TFRACTAL:
        return build_t_fractal(level)
    if fam is Family.CARPET:
        if a is None:
            raise ValueError("carpet tables need the parameter a")
        return build_carpet(a, level)
    if fam is Family.SQUARE:
        return build_square()
    return build_triangle()


# -- iterated function systems ---------------------------------------------

@dataclass(frozen=True)
class Similarity:
    """x -> scale * R(angle) x + shift, with the rotation given by cos and sin."""

    scale: Fraction
    cos: QSqrt3
    sin: QSqrt3
    shift: Vec

    def __post_init__(self):
        if not (0 < self.scale < 1):
            raise ValueError("contraction ratio must lie in (0, 1)")

    def __call__(self, p: Vec) -> Vec:
        return rotate(p, self.cos, self.sin).scale(Q(self.scale)) + self.shift


@dataclass(frozen=True)
class IfsSystem:
    maps: tuple[Similarity, ...]

    def apply(self, polys: Sequence[Sequence[Vec]]) -> list[tuple[Vec, ...]]:
        return [tuple(f(p) for p in poly) for f in self.maps for poly in polys]


def koch_ifs() -> IfsSystem:
    third = Fraction(1, 3)
    c0, s0 = trig_pi_over_6(0)
    cp, sp = trig_pi_over_6(2)
    cm, sm = trig_pi_over_6(-2)
    return IfsSystem((
        Similarity(third, c0, s0, Vec(ZERO, ZERO)),
        Similarity(third, cp, sp, Vec(Q(third), ZERO)),
        Similarity(third, cm, sm, Vec(HALF, Q(0, Fraction(1, 6)))),
        Similarity(third, c0, s0, Vec(Q(Fraction(2, 3)), ZERO)),
    ))


def carpet_ifs(a: int) -> IfsSystem:
    _check_carpet_a(a)
    k = (a - 1) // 2
    c0, s0 = trig_pi_over_6(0)
    r = Fraction(1, a)
    return IfsSystem(tuple(
        Similarity(r, c0, s0, Vec(Q(r * i), Q(r * j)))
        for i in range(a) for j in range(a) if not (i == k and j == k)))


def ifs_iterate(system: IfsSystem, seed: Sequence[Sequence[Vec]], m: int) -> list[tuple[Vec, ...]]:
    """Phi^m applied to a finite union of polygons (or polylines)."""
    if m < 0:
        raise ValueError("m must be >= 0")
    polys = [tuple(p) for p in seed]
    for _ in range(m):
        polys = system.apply(polys)
    return polys


# -- boundary point taxonomy -----------------------------------------------

def koch_side_address(table: Table, p: Vec) -> tuple[Side, ternary.Address]:
    """The side of KS_n carrying p and p's address along it (start vertex first)."""
    sides = table.sides_through(p)
    if not sides:
        raise ValueError(f"{p} is not on the boundary")
    side = sides[0]
    s = table.side_param(p, side)
    if not s.is_rational:
        raise ValueError("side parameter is irrational; no ternary address")
    return side, ternary.address_of(s.to_fraction())


def _t_persistent(n: int, p: Vec) -> bool:
    nxt = build_t_fractal(n + 1)
    return nxt.on_boundary(p) and not nxt.is_vertex(p)


def classify_point(table: Table, p: Vec) -> PointClass:
    """Corner / Cantor point / smooth fractal point of the limit table.

    ``NonPersistent`` marks a point of the current prefractal boundary that a
    later level removes, so it belongs to neither category of the limit.
    """
    if not table.on_boundary(p):
        return PointClass.NOT_ON_BOUNDARY
    if table.is_vertex(p):
        return PointClass.CORNER
    fam = table.family
    if fam is Family.KOCH:
        _, addr = koch_side_address(table, p)
        if not ternary.in_cantor(addr):
            return PointClass.NON_PERSISTENT
        if ternary.is_ternary_number(ternary.value_of(addr)):
            return PointClass.CORNER
        return PointClass.CANTOR_POINT
    if fam is Family.TFRACTAL:
        if build_t_fractal(table.level + 1).is_vertex(p):
            return PointClass.CORNER
        if not _t_persistent(table.level, p):
            return PointClass.NON_PERSISTENT
        return PointClass.SMOOTH_FRACTAL_POINT
    return PointClass.SMOOTH_FRACTAL_POINT


def is_smooth_fractal_point(table: Table, p: Vec) -> bool:
    return classify_point(table, p) in (PointClass.CANTOR_POINT,
                                        PointClass.SMOOTH_FRACTAL_POINT)


def dihedral_order(table: Table) -> int:
    """N = lcm of the denominators of the interior angles (in units of pi)."""
    return lcm(*[v.angle.denominator for v in table.vertices.values()])


def tiling_polygon(table: Table) -> tuple[Vec, ...]:
    """The tile D_n = c_n D_0 that tiles the table."""
    c = Q(table.cell_scale)
    if table.family in (Family.KOCH, Family.TRIANGLE):
        return (Vec(ZERO, ZERO), Vec(c, ZERO), Vec(c * HALF, c * SQRT3 * HALF))
    return _square_ring(Fraction(0), Fraction(0), table.cell_scale)
