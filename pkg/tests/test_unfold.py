from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from fractal_billiards.billiard import GeometryError, State, run_orbit
from fractal_billiards.exact import Q, SQRT3, Vec
from fractal_billiards.tables import (build_koch_snowflake, build_square, build_t_fractal,
                                      build_triangle)
from fractal_billiards.unfold import (Affine, cone_audit, dihedral_of, fold_orbit,
                                      fold_point, reflect_unfold, repeats, tile_for,
                                      unfold_orbit)

vecs = st.builds(lambda a, b, c, d: Vec(Q(a, b), Q(c, d)),
                 *[st.fractions(min_value=-5, max_value=5, max_denominator=8)] * 4)


def P(x, y=0):
    return Vec(Q(F(x)), Q(F(y)))


@given(vecs, vecs.filter(lambda v: not v.is_zero()), vecs)
def test_reflections_are_involutions(point, direction, x):
    r = Affine.reflection(point, direction)
    assert r(r(x)) == x
    assert r(point) == point and r(point + direction) == point + direction
    assert r.det == Q(-1)


@given(vecs, vecs)
def test_point_reflection(c, x):
    r = Affine.point_reflection(c)
    assert r(r(x)) == x and r(c) == c and r.det == Q(1)


def test_compose_order():
    a = Affine.reflection(P(0), P(1))
    b = Affine.point_reflection(P(1, 1))
    x = P(F(1, 3), F(2, 5))
    assert a.compose(b)(x) == a(b(x))


def test_dihedral_data():
    assert dihedral_of(build_square()).copies == 4
    assert dihedral_of(build_triangle()).copies == 6
    assert dihedral_of(build_koch_snowflake(2)).N == 3
    assert dihedral_of(build_t_fractal(1)).N == 2


def test_cone_audit():
    cones = {c.angle: c for c in cone_audit(build_koch_snowflake(1))}
    assert cones[F(1, 3)].cone_angle == 2 and cones[F(1, 3)].removable
    assert cones[F(4, 3)].cone_angle == 8 and not cones[F(4, 3)].removable
    t = {c.angle: c for c in cone_audit(build_t_fractal(0))}
    assert t[F(3, 2)].cone_angle == 6 and t[F(1, 2)].removable


def test_square_unfolding():
    orbit = run_orbit(build_square(), State(P(F(1, 4)), Vec(Q(1), Q(1))))
    un = unfold_orbit(build_square(), orbit)
    assert un.n_copies == 4 and un.is_collinear()
    # one period moves the unfolded point across a 2 x 2 fundamental domain
    assert un.segments[-1][1] == P(F(9, 4), 2)


def test_fagnano_unfolding():
    tri = build_triangle()
    orbit = run_orbit(tri, State(P(F(1, 2)), Vec(Q(1), SQRT3)))
    un = unfold_orbit(tri, orbit)
    assert un.n_copies == 3 and un.is_collinear()


def test_corner_orbit_unfolds_through_the_corner():
    tri = build_triangle()
    orbit = run_orbit(tri, State(P(F(1, 2)), Vec(Q(0), Q(1))))
    assert orbit.period == 2
    assert unfold_orbit(tri, orbit).is_collinear()


def test_non_periodic_needs_explicit_span():
    orbit = run_orbit(build_square(), State(P(F(1, 3)), Vec(Q(1), SQRT3)), 20)
    with pytest.raises(GeometryError):
        unfold_orbit(build_square(), orbit)
    assert unfold_orbit(build_square(), orbit, steps=10).is_collinear()


def test_fold_point():
    tile = tile_for(build_square())
    q, g = fold_point(tile, P(F(5, 2), F(-1, 3)))
    assert q == P(F(1, 2), F(1, 3))
    assert g(P(F(5, 2), F(-1, 3))) == q
    inside = P(F(1, 4), F(1, 2))
    assert fold_point(tile, inside)[0] == inside


@settings(max_examples=30, deadline=None)
@given(st.fractions(min_value=0, max_value=1, max_denominator=20).filter(lambda x: 0 < x < 1),
       st.integers(1, 4), st.integers(-4, 4), st.sampled_from([2, 3]))
def test_square_round_trip(x0, p, q, s):
    small = build_square()
    orbit = run_orbit(small, State(P(x0), Vec(Q(q), Q(p))), 400)
    if not orbit.is_periodic:
        return
    big = build_square(s)
    folded = fold_orbit(big, reflect_unfold(small, orbit, big), small)
    assert repeats(orbit, folded, s)


def test_fold_into_t_fractal_tiles():
    small = build_square()
    orbit = run_orbit(small, State(P(F(1, 3)), Vec(Q(2), Q(1))))
    big = build_t_fractal(0)
    big_orbit = reflect_unfold(small, orbit, big)
    assert big_orbit.is_periodic
    folded = fold_orbit(big, big_orbit, small)
    s = len(folded) // orbit.period
    assert s * orbit.period == len(folded) and repeats(orbit, folded, s)


def test_repeats_rejects_short_lists():
    orbit = run_orbit(build_square(), State(P(F(1, 4)), Vec(Q(1), Q(1))))
    assert not repeats(orbit, orbit.states[:2], 1)
    assert repeats(orbit, orbit.states * 2, 2)
