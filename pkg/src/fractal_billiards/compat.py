"""Compatible orbits across prefractal levels, and what they converge to."""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .billiard import (GeometryError, Orbit, OrbitStatus, State, next_hit,
                       reflect, run_orbit)
from .exact import Q, QSqrt3, Vec
from .tables import (Family, PointClass, Table, build_table, classify_point,
                     koch_side_address)
from . import ternary


class LiftError(GeometryError):
    """No compatible basepoint exists on the finer level."""


@dataclass
class LevelOrbit:
    level: int
    init: State
    orbit: Orbit


@dataclass
class CompatSequence:
    family: Family
    start_level: int
    direction: Vec
    levels: list[LevelOrbit] = field(default_factory=list)
    carpet_a: Optional[int] = None
    truncated: Optional[str] = None  # why the sequence stopped early, if it did

    def orbit_at(self, n: int) -> Orbit:
        for lv in self.levels:
            if lv.level == n:
                return lv.orbit
        raise KeyError(n)

    @property
    def statuses(self) -> list[OrbitStatus]:
        return [lv.orbit.status for lv in self.levels]

    @property
    def all_periodic(self) -> bool:
        return bool(self.levels) and all(s is OrbitStatus.PERIODIC for s in self.statuses)


def lift_initial(init: State, table: Table) -> State:
    """The basepoint on ``table`` compatible with ``init`` (same direction).

    A basepoint already on the finer boundary is kept.  Otherwise it sits
    inside the finer domain, and the compatible point is where the reversed
    ray first meets the finer boundary.
    """
    p, d = init.point, init.direction
    if table.on_boundary(p):
        return init
    if not table.contains(p):
        raise LiftError(f"{p} lies outside the level-{table.level} table")
    ev = next_hit(table, p, -d)
    if ev.is_corner:
        raise LiftError(f"reversed ray meets the corner {ev.point}")
    return State(ev.point, d)


def build_sequence(family: Family | str, init: State, start_level: int, depth: int,
                   max_bounces: int = 5000, a: Optional[int] = None) -> CompatSequence:
    fam = Family(family)
    seq = CompatSequence(fam, start_level, init.direction, carpet_a=a)
    if not build_table(fam, start_level, a).on_boundary(init.point):
        raise GeometryError("initial basepoint is not on the starting table")
    for n in range(start_level, depth + 1):
        table = build_table(fam, n, a)
        try:
            st = lift_initial(init, table)
            orbit = run_orbit(table, st, max_bounces)
        except GeometryError as exc:
            seq.truncated = f"level {n}: {exc}"
            break
        seq.levels.append(LevelOrbit(n, st, orbit))
    return seq


# -- constancy ---------------------------------------------------------------

@dataclass(frozen=True)
class ConstantFrom:
    level: int

    def __str__(self):
        return f"ConstantFrom({self.level})"


@dataclass(frozen=True)
class NotConstantWithinDepth:
    depth: int

    def __str__(self):
        return "NotConstantWithinDepth"


def path_signature(orbit: Orbit) -> frozenset:
    """The traversed path as a set of (basepoint, outgoing direction) states."""
    return frozenset((s.point, s.direction) for s in orbit.states)


def detect_constancy(seq: CompatSequence) -> ConstantFrom | NotConstantWithinDepth:
    if len(seq.levels) < 2:
        raise ValueError("constancy needs at least two levels")
    sigs = [path_signature(lv.orbit) for lv in seq.levels]
    depth = seq.levels[-1].level
    start = len(sigs) - 1
    while start > 0 and sigs[start - 1] == sigs[-1]:
        start -= 1
    if start == len(sigs) - 1:
        return NotConstantWithinDepth(depth)
    return ConstantFrom(seq.levels[start].level)


# -- hybrid orbits -----------------------------------------------------------

# infinitely-often sets of the allowed types [c,lr], [cl,r], [cr,l], [lcr,0], [lr,0]
_HYBRID_INF = {frozenset("c"), frozenset("cl"), frozenset("cr"), frozenset("lcr"),
               frozenset("lr")}


@dataclass(frozen=True)
class HybridVerdict:
    is_hybrid: bool
    per_basepoint: tuple[ternary.RepType, ...]
    exceptions: int


def basepoint_types(table: Table, orbit: Orbit) -> list[ternary.RepType]:
    out = []
    for p in orbit.basepoints:
        if table.is_vertex(p):
            # a corner sits at the end of its side: address (l) or (r)
            out.append(ternary.RepType(frozenset("l"), frozenset()))
            continue
        _, addr = koch_side_address(table, p)
        out.append(ternary.rep_type(addr))
    return out


def is_hybrid_type(rt: ternary.RepType) -> bool:
    return rt.infinitely_often in _HYBRID_INF


def classify_hybrid(table: Table, orbit: Orbit) -> HybridVerdict:
    if table.family not in (Family.KOCH, Family.TRIANGLE):
        raise ValueError("hybrid orbits are defined on Koch snowflake tables")
    types = basepoint_types(table, orbit)
    bad = sum(1 for t in types if not is_hybrid_type(t))
    return HybridVerdict(bad <= 2, tuple(types), bad)


# -- direction families on the snowflake ---------------------------------------

@dataclass(frozen=True)
class BoddVerdict:
    part: Optional[int]  # 1, 2 or None when the hypotheses fail
    direction: Vec

    @property
    def applicable(self) -> bool:
        return self.part is not None


def _odd_over_power(x: Fraction, base: int) -> bool:
    """x = r / base^s with s >= 1, r odd and 1 <= r < base^s."""
    if not (0 < x < 1) or x.numerator % 2 == 0:
        return False
    d = x.denominator
    while d % base == 0:
        d //= base
    return d == 1


def thm_bodd_condition(a, b: int, x0) -> BoddVerdict:
    """Hypotheses for periodic hybrid sequences with direction (2a+b, b*sqrt3)."""
    a, x0 = Fraction(a), Fraction(x0)
    direction = Vec(Q(2 * a + b), Q(0, b))
    if not isinstance(b, int) or b <= 0 or b % 2 == 0:
        return BoddVerdict(None, direction)
    if a.denominator == 1 and a > 0 and _odd_over_power(x0, 4):
        return BoddVerdict(1, direction)
    if a == Fraction(1, 2) and _odd_over_power(x0, 2):
        return BoddVerdict(2, direction)
    return BoddVerdict(None, direction)


# -- T-fractal slopes ----------------------------------------------------------

def _split_three(x0: Fraction) -> tuple[int, int]:
    x0 = Fraction(x0)
    t, den = x0.numerator, x0.denominator
    k = 0
    while den % 3 == 0:
        den //= 3
        k += 1
    if den != 1 or k < 1 or t % 3 == 0:
        raise ValueError(f"x0 must be t/3^k with k >= 1 and 3 not dividing t, got {x0}")
    return t, k


def _odd_part(n: int) -> int:
    n = abs(n)
    while n and n % 2 == 0:
        n //= 2
    return n


def _is_dyadic(x: Fraction) -> bool:
    d = x.denominator
    return d & (d - 1) == 0


def t_slope_witness(x0, m) -> Optional[tuple[Fraction, Fraction]]:
    """A dyadic point on y = m (x - x0), or None when there is none.

    With x0 = t/3^k and m = u/v in lowest terms, x - x0 never has a factor 3
    cancelled by a dyadic x, so a dyadic point exists exactly when 3^k | u.
    Then x = p with p 3^k = t (mod odd part of v) clears the odd denominator.
    """
    t, k = _split_three(x0)
    m = Fraction(m)
    u, v = m.numerator, m.denominator
    if u % 3 ** k:
        return None
    vo = _odd_part(v)
    p = (t * pow(3 ** k, -1, vo)) % vo if vo > 1 else 0
    x = Fraction(p)
    y = m * (x - Fraction(x0))
    assert _is_dyadic(x) and _is_dyadic(y)
    return x, y


def t_slope_forbidden(x0, m) -> bool:
    """Does the line through (x0, 0) with slope m hit a dyadic lattice point?"""
    if not isinstance(m, (int, Fraction)):
        return False  # irrational slopes never do
    return t_slope_witness(x0, m) is not None


def eq41_slope(x0, p: int, q: int, r: int, s: int) -> Fraction:
    """Member of the forbidden family q 2^(r-s) 3^k / (p 3^k - t 2^r)."""
    t, k = _split_three(x0)
    den = p * 3 ** k - t * 2 ** r
    if den == 0:
        raise ZeroDivisionError("vertical line")
    return Fraction(q * 3 ** k, den) * Fraction(2) ** (r - s)


def admissible_slope(gamma: int, alpha: int, beta: int) -> Fraction:
    return Fraction(2 ** gamma, (2 * alpha + 1) ** beta)


# -- Cantor orbits -------------------------------------------------------------

@dataclass(frozen=True)
class NotCantor:
    witness: Vec
    point_class: PointClass


def cantor_orbit(table: Table, init: State, max_bounces: int = 5000) -> Orbit | NotCantor:
    orbit = run_orbit(table, init, max_bounces)
    if not orbit.is_periodic:
        return NotCantor(orbit.basepoints[-1], PointClass.CORNER)
    for p in orbit.basepoints:
        cls = classify_point(table, p)
        if cls not in (PointClass.CANTOR_POINT, PointClass.SMOOTH_FRACTAL_POINT):
            return NotCantor(p, cls)
    return orbit


# -- nontrivial paths ------------------------------------------------------------

@dataclass
class PathLevel:
    level: int
    polyline: list[Vec]  # seed, persistent bounces, then the leading vertex
    vertex: Vec
    vertex_class: PointClass


@dataclass
class NontrivialPath:
    family: Family
    seed: State
    levels: list[PathLevel]
    vertices: list[Vec]  # leading vertex v_n of every level, in level order
    vertex_levels: list[int]
    # |v_(n+4) - v_(n+2)|^2 / |v_(n+2) - v_n|^2: the paths repeat with period two
    decay_ratios: list[Fraction]
    target_estimate: tuple[float, float]
    error_bound: float

    @property
    def descriptor(self) -> str:
        d = self.seed.direction
        return (f"elusive point reached by the {self.family.value} path from "
                f"{self.seed.point} along ({d.x}, {d.y})")

    def distinct_vertices(self) -> list[Vec]:
        out: list[Vec] = []
        for v in self.vertices:
            if not out or out[-1] != v:
                out.append(v)
        return out


def _leading_vertex(table: Table, seed: State, max_bounces: int) -> PathLevel:
    """Follow the seed until it meets a point the limit table does not keep."""
    pts = [seed.point]
    p, d = seed.point, seed.direction
    for _ in range(max_bounces):
        ev = next_hit(table, p, d)
        pts.append(ev.point)
        cls = classify_point(table, ev.point)
        if ev.is_corner or cls not in (PointClass.CANTOR_POINT,
                                       PointClass.SMOOTH_FRACTAL_POINT):
            return PathLevel(table.level, pts, ev.point, cls)
        p, d = ev.point, reflect(ev.side, d)
    raise GeometryError("path never meets a removed point within the budget")


def _squared(q: QSqrt3) -> Fraction:
    if not q.is_rational:
        raise ValueError("squared distance left the rationals")
    return q.to_fraction()


def build_nontrivial_path(family: Family | str, seed: State, depth: int,
                          start_level: int = 0, max_bounces: int = 200) -> NontrivialPath:
    """Leading vertices v_n of the seed path on F_n, for n = start..depth.

    On each level the path from the seed bounces off persistent points and
    ends at the first point a later level removes; those end points move
    toward an elusive point of the limit table.
    """
    fam = Family(family)
    levels = []
    for n in range(start_level, depth + 1):
        table = build_table(fam, n)
        st = lift_initial(seed, table) if n > start_level else seed
        levels.append(_leading_vertex(table, st, max_bounces))
    verts = [lv.vertex for lv in levels]
    vlev = [lv.level for lv in levels]
    two = [_squared((verts[n + 2] - verts[n]).norm2()) for n in range(len(verts) - 2)]
    ratios = [two[n + 2] / two[n] for n in range(len(two) - 2) if two[n]]
    last = verts[-1].to_float()
    if len(verts) >= 3 and ratios:
        r = min(float(ratios[-1]) ** 0.5, 0.99)
        prev = verts[-3].to_float()
        k = r / (1 - r)
        est = (last[0] + (last[0] - prev[0]) * k, last[1] + (last[1] - prev[1]) * k)
        err = float(two[-1]) ** 0.5 * k
    else:
        est, err = last, float("inf")
    return NontrivialPath(fam, seed, levels, verts, vlev, ratios, est, err)


def mirrored_seed(seed: State) -> State:
    """The twin seed with direction pi - theta."""
    d = seed.direction
    return State(seed.point, Vec(-d.x, d.y))
