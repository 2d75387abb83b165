"""The billiard map on a prefractal table, orbits and their footprints."""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from .exact import QSqrt3, Vec, HitKind, mirror, segment_intersect
from .kernel import ray_candidates
from .tables import Family, Side, Table, VertexInfo

_TOL = 1e-9


class GeometryError(ValueError):
    """A state the billiard map is undefined on (tangent start, outward ray...)."""


class CornerPolicy(str, Enum):
    RESOLVE = "resolve"  # continue through removable corners, stop at the rest
    TERMINATE = "terminate"  # stop at every corner


class OrbitStatus(str, Enum):
    PERIODIC = "Periodic"
    CLOSED_SINGULAR = "ClosedSingular"
    SADDLE_CONNECTION = "SaddleConnection"
    BUDGET_EXHAUSTED = "BudgetExhausted"


@dataclass(frozen=True)
class State:
    point: Vec
    direction: Vec


@dataclass(frozen=True)
class StepResult:
    point: Vec
    incoming: Vec
    side: Optional[Side]  # hit side for an ordinary bounce
    vertex: Optional[VertexInfo]  # hit vertex for a corner event
    t: QSqrt3

    @property
    def is_corner(self) -> bool:
        return self.vertex is not None


@dataclass(frozen=True)
class FootprintEntry:
    point: Vec
    incoming: Optional[Vec]
    outgoing: Optional[Vec]
    side: Optional[int]
    corner_angle: Optional[object] = None  # interior angle / pi when at a vertex


@dataclass
class Orbit:
    init: State
    entries: list[FootprintEntry]
    status: OrbitStatus
    period: Optional[int] = None
    backward: list[FootprintEntry] = field(default_factory=list)

    @property
    def basepoints(self) -> list[Vec]:
        return [e.point for e in self.entries]

    @property
    def footprint(self) -> frozenset:
        return frozenset(self.basepoints)

    @property
    def states(self) -> list[State]:
        return [State(e.point, e.outgoing) for e in self.entries if e.outgoing is not None]

    @property
    def is_periodic(self) -> bool:
        return self.status is OrbitStatus.PERIODIC


def _direction_inside(table: Table, p: Vec, d: Vec) -> bool:
    """Does d point strictly into the domain from boundary point p?"""
    v = table.vertices.get(p)
    if v is None:
        sides = table.sides_through(p)
        if not sides:
            raise GeometryError(f"{p} is not on the table boundary")
        return sides[0].direction.cross(d).sign() > 0
    u_out = table.sides[v.outgoing].direction
    u_in = -table.sides[v.incoming].direction
    if v.angle < 1:
        return u_out.cross(d).sign() > 0 and d.cross(u_in).sign() > 0
    return not (u_in.cross(d).sign() >= 0 and d.cross(u_out).sign() >= 0)


def is_inward(table: Table, p: Vec, d: Vec) -> bool:
    return not d.is_zero() and _direction_inside(table, p, d)


def next_hit(table: Table, p: Vec, d: Vec) -> StepResult:
    """First boundary point met by the ray p + t d, t > 0 (exact)."""
    px, py = p.to_float()
    dx, dy = d.to_float()
    ts, idx = ray_candidates(px, py, dx, dy, table.segment_floats, _TOL)
    best = None
    best_f = None
    for tf, i in zip(ts, idx):
        if best_f is not None and tf > best_f + _TOL * (1.0 + abs(best_f)):
            break
        side = table.sides[int(i)]
        hit = segment_intersect(p, d, side.a, side.b)
        if hit is None:
            continue
        if best is None or hit.t < best[0].t:
            best = (hit, side)
            best_f = float(hit.t)
    if best is None:
        raise GeometryError("ray leaves the table without hitting the boundary")
    hit, side = best
    if hit.kind is HitKind.INTERIOR:
        return StepResult(hit.point, d, side, None, hit.t)
    return StepResult(hit.point, d, None, table.vertices[hit.point], hit.t)


def billiard_step(table: Table, state: State) -> StepResult:
    if not is_inward(table, state.point, state.direction):
        raise GeometryError("direction is not strictly inward at the basepoint")
    return next_hit(table, state.point, state.direction)


def reflect(side: Side, d: Vec) -> Vec:
    return mirror(d, side.direction)


def _bisector(table: Table, v: VertexInfo) -> Vec:
    u1 = table.sides[v.outgoing].b - v.point
    u2 = table.sides[v.incoming].a - v.point
    l1 = u1.norm2().sqrt_if_rational_square()
    l2 = u2.norm2().sqrt_if_rational_square()
    if l1 is None or l2 is None:
        raise GeometryError("corner sides must have rational length")
    return u1.scale(l2) + u2.scale(l1)


def resolve_corner(table: Table, event: StepResult,
                   policy: CornerPolicy = CornerPolicy.RESOLVE) -> Optional[Vec]:
    """Outgoing direction after a corner hit, or None when the orbit stops there."""
    v = event.vertex
    if v is None:
        raise ValueError("not a corner event")
    if policy is CornerPolicy.TERMINATE or not v.removable:
        return None
    d = event.incoming
    if v.angle.denominator == 2:
        return -d
    if v.angle.denominator == 3:
        return mirror(-d, _bisector(table, v))
    raise GeometryError(f"no corner rule for angle {v.angle} pi")


def _backward_direction(table: Table, p: Vec, d: Vec) -> Optional[Vec]:
    """Direction of the reversed orbit leaving p, or None at a reflex corner."""
    v = table.vertices.get(p)
    if v is None:
        side = table.sides_through(p)[0]
        return -reflect(side, d)
    if not v.removable:
        return None
    if v.angle.denominator == 2:
        return d
    return mirror(d, _bisector(table, v))


def _walk(table: Table, start: State, max_bounces: int, policy: CornerPolicy,
          stop_on_return: bool):
    entries: list[FootprintEntry] = []
    p, d = start.point, start.direction
    for k in range(1, max_bounces + 1):
        ev = next_hit(table, p, d)
        if ev.is_corner:
            out = resolve_corner(table, ev, policy)
            entry = FootprintEntry(ev.point, d, out, None, ev.vertex.angle)
        else:
            out = reflect(ev.side, d)
            entry = FootprintEntry(ev.point, d, out, ev.side.index)
        if out is None:
            entries.append(entry)
            return entries, "corner", k
        if stop_on_return and ev.point == start.point and out == start.direction:
            return entries, "return", k
        entries.append(entry)
        p, d = ev.point, out
    return entries, "budget", max_bounces


def run_orbit(table: Table, init: State | tuple, max_bounces: int = 1000,
              policy: CornerPolicy = CornerPolicy.RESOLVE) -> Orbit:
    if max_bounces < 1:
        raise ValueError("max_bounces must be >= 1")
    if not isinstance(init, State):
        init = State(*init)
    p0, d0 = init.point, init.direction
    if not is_inward(table, p0, d0):
        raise GeometryError("direction is not strictly inward at the basepoint")

    v0 = table.vertices.get(p0)
    back_dir = _backward_direction(table, p0, d0)
    side0 = None if v0 is not None else table.sides_through(p0)[0].index
    first = FootprintEntry(p0, None if back_dir is None else -back_dir, d0, side0,
                           None if v0 is None else v0.angle)

    fwd, why, k = _walk(table, init, max_bounces, policy, True)
    entries = [first] + fwd
    if why == "return":
        return Orbit(init, entries, OrbitStatus.PERIODIC, period=k)
    if why == "budget":
        return Orbit(init, entries, OrbitStatus.BUDGET_EXHAUSTED)

    if back_dir is None:
        return Orbit(init, entries, OrbitStatus.SADDLE_CONNECTION)
    back, bwhy, _ = _walk(table, State(p0, back_dir), max_bounces, policy, False)
    status = OrbitStatus.SADDLE_CONNECTION if bwhy == "corner" else OrbitStatus.CLOSED_SINGULAR
    return Orbit(init, entries, status, backward=back)


def is_rational_direction(table: Table | Family, d: Vec) -> bool:
    """Rational with respect to the table's unfolding lattice."""
    if d.is_zero():
        raise ValueError("direction must be nonzero")
    fam = table.family if isinstance(table, Table) else Family(table)
    if fam in (Family.KOCH, Family.TRIANGLE):
        # d = m(1,0) + n(1/2, sqrt3/2) up to scale iff dx/dy is a rational multiple of sqrt3
        if not d.y:
            return True
        return (d.x / d.y).rational_part == 0
    if not d.x:
        return True
    return (d.y / d.x).is_rational
