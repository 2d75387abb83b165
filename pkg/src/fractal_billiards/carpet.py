"""Self-similar Sierpinski carpets: slope sets, segments and billiard orbits."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .billiard import Orbit, State, run_orbit
from .compat import CompatSequence, build_sequence
from .exact import Q, Vec
from .tables import (Family, PeripheralSquare, Table, _check_carpet_a,
                     _square_ring, build_carpet)


@dataclass(frozen=True)
class SlopeSets:
    a: int
    A: frozenset
    B: frozenset

    @property
    def all(self) -> frozenset:
        return self.A | self.B


def slope_sets(a: int) -> SlopeSets:
    """A: p+q <= a, 0 <= p < q <= a-1, p+q odd.  B: p+q <= a-1, 0 <= p <= q <= a-2, p, q odd."""
    _check_carpet_a(a)
    A = {Fraction(p, q) for q in range(1, a) for p in range(0, q)
         if p + q <= a and (p + q) % 2 == 1}
    B = {Fraction(p, q) for q in range(1, a - 1) for p in range(1, q + 1)
         if p + q <= a - 1 and p % 2 == 1 and q % 2 == 1}
    return SlopeSets(a, frozenset(A), frozenset(B))


# -- segments against peripheral squares ----------------------------------------

@dataclass(frozen=True)
class Avoids:
    checked: tuple[int, ...]  # peripheral squares examined per level

    def __str__(self):
        return "Avoids"


@dataclass(frozen=True)
class Touches:
    contacts: tuple[tuple[Fraction, Fraction], ...]
    checked: tuple[int, ...]
    along_edge: bool = False

    def __str__(self):
        return f"Touches({', '.join(f'({x}, {y})' for x, y in self.contacts)})"


@dataclass(frozen=True)
class Crosses:
    square: PeripheralSquare
    level: int

    def __str__(self):
        return f"Crosses(level {self.level}, corner ({self.square.x0}, {self.square.y0}))"


def _clip(p, d, x0, y0, h) -> Optional[tuple[Fraction, Fraction]]:
    """Parameter interval of p + t d (0 <= t <= 1) inside the closed square."""
    lo, hi = Fraction(0), Fraction(1)
    for pc, dc, a, b in ((p[0], d[0], x0, x0 + h), (p[1], d[1], y0, y0 + h)):
        if dc == 0:
            if pc < a or pc > b:
                return None
            continue
        t1, t2 = (a - pc) / dc, (b - pc) / dc
        if t1 > t2:
            t1, t2 = t2, t1
        lo, hi = max(lo, t1), min(hi, t2)
        if lo > hi:
            return None
    return lo, hi


def _contact(p, d, x0, y0, h):
    """None, ('cross',), ('vertex', pt), ('edge', pt) or ('along', pt)."""
    iv = _clip(p, d, x0, y0, h)
    if iv is None:
        return None
    lo, hi = iv
    tm = (lo + hi) / 2
    mx, my = p[0] + tm * d[0], p[1] + tm * d[1]
    if x0 < mx < x0 + h and y0 < my < y0 + h:
        return ("cross",)
    pt = (mx, my)
    if lo < hi:
        return ("along", pt)
    if mx in (x0, x0 + h) and my in (y0, y0 + h):
        return ("vertex", pt)
    return ("edge", pt)


def unit_square_segment(start, slope) -> tuple[tuple, tuple]:
    """Start point and displacement of the maximal forward segment in [0,1]^2."""
    sx, sy = Fraction(start[0]), Fraction(start[1])
    m = Fraction(slope)
    if m < 0:
        raise ValueError("slopes are taken nonnegative")
    tx = 1 - sx  # run until x = 1 ...
    if m > 0:
        tx = min(tx, (1 - sy) / m)  # ... or y = 1
    return (sx, sy), (tx, m * tx)


def segment_avoids_peripherals(start, slope, a: int, depth: int,
                               end=None, min_level: int = 1) -> Avoids | Touches | Crosses:
    """Classify a segment against the peripheral squares of levels min_level..depth.

    The segment runs from ``start`` with the given slope to the edge of the
    unit square unless ``end`` is given.  Only cells the closed segment meets
    are refined, so the work grows with the number of crossed cells.
    """
    _check_carpet_a(a)
    if end is None:
        p, d = unit_square_segment(start, slope)
    else:
        p = (Fraction(start[0]), Fraction(start[1]))
        d = (Fraction(end[0]) - p[0], Fraction(end[1]) - p[1])
    k = (a - 1) // 2
    checked = [0] * depth
    contacts = []
    along = False
    cells = [(Fraction(0), Fraction(0), Fraction(1))]
    for lvl in range(1, depth + 1):
        nxt = []
        for cx, cy, h in cells:
            s = h / a
            sq = (cx + k * s, cy + k * s, s)
            c = None
            if lvl >= min_level:
                checked[lvl - 1] += 1
                c = _contact(p, d, *sq)
            if c is not None:
                if c[0] == "cross":
                    return Crosses(PeripheralSquare(lvl, *sq), lvl)
                contacts.append(c[1])
                along = along or c[0] in ("along", "edge")
            if lvl == depth:
                continue
            for i in range(a):
                for j in range(a):
                    if i == k and j == k:
                        continue
                    x0, y0 = cx + i * s, cy + j * s
                    if _clip(p, d, x0, y0, s) is not None:
                        nxt.append((x0, y0, s))
        cells = nxt
    if contacts:
        return Touches(tuple(dict.fromkeys(contacts)), tuple(checked), along)
    return Avoids(tuple(checked))


# -- cells and their orbits --------------------------------------------------------

@dataclass(frozen=True)
class Cell:
    level: int
    x0: Fraction
    y0: Fraction
    side: Fraction

    @classmethod
    def from_digits(cls, a: int, digits: Sequence[tuple[int, int]]) -> "Cell":
        """The cell phi_(i1,j1) o ... o phi_(ik,jk) of the unit square."""
        _check_carpet_a(a)
        k = (a - 1) // 2
        x = y = Fraction(0)
        h = Fraction(1)
        for i, j in digits:
            if (i, j) == (k, k) or not (0 <= i < a and 0 <= j < a):
                raise ValueError(f"({i}, {j}) is not a carpet map index for a={a}")
            h /= a
            x, y = x + i * h, y + j * h
        return cls(len(digits), x, y, h)

    def to_cell(self, p: Vec) -> Vec:
        """Image of a unit-square point under the cell's contraction."""
        h = Q(self.side)
        return Vec(p.x * h + Q(self.x0), p.y * h + Q(self.y0))

    def table(self) -> Table:
        return Table(Family.SQUARE, self.level, _square_ring(self.x0, self.y0, self.side),
                     cell_scale=self.side)


def cell_orbit(cell: Cell, init: State, max_bounces: int = 1000) -> Orbit:
    """Orbit of the cell treated as a square billiard on its own."""
    return run_orbit(cell.table(), init, max_bounces)


# -- carpet billiard sequences -----------------------------------------------------

def slope_direction(alpha) -> Vec:
    alpha = Fraction(alpha)
    return Vec(Q(alpha.denominator), Q(alpha.numerator))


def constant_carpet_sequence(a: int, k: int, p: int, alpha, depth: int,
                             max_bounces: int = 20000) -> CompatSequence:
    """Orbits from (p / (2 a^k), 0) with slope alpha in B_a, levels k..depth."""
    _check_carpet_a(a)
    alpha = Fraction(alpha)
    if alpha not in slope_sets(a).B:
        raise ValueError(f"slope {alpha} is not in B_{a}")
    if p <= 0 or p % 2 == 0 or p > a ** k:
        raise ValueError(f"p must be odd with 1 <= p <= {a ** k}")
    if depth < k:
        raise ValueError("depth must be >= k")
    x0 = Vec(Q(Fraction(p, 2 * a ** k)), Q(0))
    return build_sequence(Family.CARPET, State(x0, slope_direction(alpha)), k, depth,
                          max_bounces, a=a)


@dataclass(frozen=True)
class ValidOrbitOfSa:
    orbit: Orbit

    @property
    def path(self) -> list[Vec]:
        return self.orbit.basepoints


@dataclass(frozen=True)
class Blocked:
    level: int
    point: Optional[Vec] = None


def alpha_in_A_orbit_check(a: int, alpha, max_bounces: int = 5000) -> ValidOrbitOfSa | Blocked:
    """Run the orbit of S_{a,1} from the origin; certify it if the middle square is missed."""
    alpha = Fraction(alpha)
    if alpha <= 0:
        raise ValueError("slope must be positive to leave the corner")
    table = build_carpet(a, 1)
    orbit = run_orbit(table, State(Vec(Q(0), Q(0)), slope_direction(alpha)), max_bounces)
    for e in orbit.entries:
        if e.side is not None and table.sides[e.side].ring != 0:
            return Blocked(1, e.point)
        if e.side is None and e.corner_angle is not None and e.corner_angle > 1:
            return Blocked(1, e.point)
    if not orbit.is_periodic:
        return Blocked(1, orbit.basepoints[-1])
    return ValidOrbitOfSa(orbit)
