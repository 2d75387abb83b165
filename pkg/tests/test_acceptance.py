"""Acceptance suite: one check per criterion, each reported as a PASS/FAIL line.

Run under pytest (the lines appear in the terminal summary) or directly with
``python tests/test_acceptance.py``.
"""
from __future__ import annotations

import random
import time
from fractions import Fraction as F

from fractal_billiards import ternary
from fractal_billiards.billiard import (Orbit, State, is_inward,
                                        run_orbit)
from fractal_billiards.carpet import (Avoids, ValidOrbitOfSa, alpha_in_A_orbit_check,
                                      constant_carpet_sequence,
                                      segment_avoids_peripherals, slope_direction,
                                      slope_sets)
from fractal_billiards.compat import (ConstantFrom, NotConstantWithinDepth,
                                      build_nontrivial_path, build_sequence,
                                      classify_hybrid, detect_constancy,
                                      eq41_slope, admissible_slope, mirrored_seed,
                                      t_slope_forbidden, t_slope_witness,
                                      thm_bodd_condition)
from fractal_billiards.exact import Q, QSqrt3, Vec, mirror
from fractal_billiards.tables import (Family, PointClass, build_carpet,
                                      build_koch_snowflake, build_square,
                                      build_t_fractal, build_triangle,
                                      koch_side_address)
from fractal_billiards.unfold import fold_orbit, reflect_unfold, repeats, unfold_orbit

SQRT3_VEC = {  # exact direction vectors for named angles
    "pi/6": Vec(Q(0, 1), Q(1)),
    "pi/4": Vec(Q(1), Q(1)),
    "pi/3": Vec(Q(1), Q(0, 1)),
}

RESULTS: dict[int, str] = {}


def _record(number: int, title: str, check):
    t0 = time.perf_counter()
    try:
        detail = check()
    except Exception as exc:
        line = f"criterion {number:2d} FAIL  {title} ({time.perf_counter() - t0:.1f} s): {exc}"
        RESULTS[number] = line
        print(line)
        raise
    line = f"criterion {number:2d} PASS  {title} ({time.perf_counter() - t0:.1f} s)"
    if detail:
        line += f": {detail}"
    RESULTS[number] = line
    print(line)


def _pt(x, y=0) -> Vec:
    return Vec(Q(F(x)), Q(F(y)))


# -- 1. exact reflection law and reversibility --------------------------------------

def _random_direction(rng: random.Random, family: Family) -> Vec:
    while True:
        m, n = rng.randint(-6, 6), rng.randint(-6, 6)
        if m or n:
            break
    if family is Family.KOCH:
        # integer combination of (1, 0) and (1/2, sqrt3/2)
        return Vec(Q(F(2 * m + n, 2)), Q(0, F(n, 2)))
    return Vec(Q(m), Q(n))


def _random_init(rng: random.Random, table) -> State | None:
    side = rng.choice(table.sides)
    t = F(rng.randint(1, 30), 31)
    p = side.a + (side.b - side.a).scale(Q(t))
    d = _random_direction(rng, table.family)
    if not side.direction.cross(d):
        return None
    if not is_inward(table, p, d):
        d = -d
    return State(p, d)


def _reflection_law_holds(table, orbit: Orbit) -> bool:
    for e in orbit.entries:
        if e.side is None or e.incoming is None or e.outgoing is None:
            continue
        if mirror(e.outgoing, table.sides[e.side].direction) != e.incoming:
            return False
    return True


def _reverse_matches(table, orbit: Orbit) -> bool | None:
    """Run backwards from the last side bounce; None when there is nothing to reverse."""
    ents = orbit.entries
    anchor = max((i for i, e in enumerate(ents) if i >= 1 and e.side is not None
                  and e.incoming is not None), default=None)
    if anchor is None:
        return None
    back = run_orbit(table, State(ents[anchor].point, -ents[anchor].incoming), anchor)
    want = [e.point for e in reversed(ents[:anchor + 1])]
    return back.basepoints[:anchor + 1] == want


def check_reflection_law():
    rng = random.Random(1)
    tables = ([build_koch_snowflake(n) for n in range(4)]
              + [build_t_fractal(n) for n in range(3)]
              + [build_carpet(3, n) for n in (1, 2)])
    runs = reversed_runs = bounces = 0
    while runs < 1000:
        table = tables[runs % len(tables)]
        init = _random_init(rng, table)
        if init is None:
            continue
        orbit = run_orbit(table, init, 100)
        runs += 1
        bounces += len(orbit.entries)
        for e in orbit.entries:
            assert isinstance(e.point.x, QSqrt3) and isinstance(e.point.y, QSqrt3)
        assert _reflection_law_holds(table, orbit), f"reflection law broken from {init}"
        rev = _reverse_matches(table, orbit)
        if rev is not None:
            assert rev, f"reversed run differs from {init}"
            reversed_runs += 1
    return f"{runs} orbits, {bounces} basepoints, {reversed_runs} reversed runs"


def test_exact_reflection_law_and_reversal():
    _record(1, "exact reflection law and reversibility", check_reflection_law)


# -- 2. geometry formulas ------------------------------------------------------

def check_geometry():
    for n in range(6):
        ks = build_koch_snowflake(n)
        assert ks.n_sides == 3 * 4 ** n
        assert ks.perimeter() == Q(3 * F(4, 3) ** n)
    for n in range(7):
        t = build_t_fractal(n)
        partial = sum(F(1, 2 ** i) for i in range(n + 1))
        assert t.height() == Q(3 * partial)
        assert t.area() == Q(8 * partial)
        assert Q(6) - t.height() == Q(F(3, 2 ** n))
        assert Q(16) - t.area() == Q(F(8, 2 ** n))
    return "KS_0..5 perimeter and sides, T_0..6 height and area"


def test_geometry_formulas():
    _record(2, "perimeter, side count, height and area", check_geometry)


# -- 3. ternary calculus ----------------------------------------------------------

def check_ternary():
    A = ternary.Address.parse
    assert ternary.address_of(F(1, 4)) == A("(lr)")
    assert ternary.address_of(F(1, 3)) == A("l(r)")
    assert ternary.address_of(F(1, 2)) == A("(c)")
    assert ternary.address_of(F(7, 12)) == A("c(rl)")
    assert str(ternary.type_of(F(7, 12))) == "[lr,c]"
    assert str(ternary.type_of(F(1, 2))) == "[c,∅]"
    rng = random.Random(3)
    for _ in range(10_000):
        den = rng.randint(1, 5000)
        x = F(rng.randint(0, den), den)
        assert ternary.value_of(ternary.address_of(x)) == x, x
    return "5 worked examples, 10000 round trips"


def test_ternary_examples_and_round_trips():
    _record(3, "ternary addresses and types", check_ternary)


# -- 4. compatible sequences ---------------------------------------------------

def _perpendicular_types(level: int) -> list[str]:
    table = build_koch_snowflake(level)
    init = State(_pt(F(3, 4)), SQRT3_VEC["pi/6"])
    seq = build_sequence(Family.KOCH, init, 0, level)
    orbit = seq.orbit_at(level)
    out = []
    for e in orbit.entries:
        if e.side is not None and e.incoming is not None and e.outgoing == -e.incoming:
            _, addr = koch_side_address(table, e.point)
            out.append(str(ternary.rep_type(addr)))
    return out


def check_compat():
    notes = []
    seq = build_sequence(Family.KOCH, State(_pt(F(1, 4)), SQRT3_VEC["pi/3"]), 0, 5)
    prints = [lv.orbit.footprint for lv in seq.levels]
    assert len(prints) == 6 and all(p == prints[0] for p in prints), "(a) footprints differ"
    notes.append("(a) ok")

    seq = build_sequence(Family.KOCH, State(_pt(F(7, 12)), SQRT3_VEC["pi/3"]), 0, 4)
    verdict = detect_constancy(seq)
    assert verdict == ConstantFrom(1), f"(b) got {verdict}"
    notes.append("(b) ok")

    seq = build_sequence(Family.TFRACTAL, State(_pt(F(4, 3)), SQRT3_VEC["pi/4"]), 0, 4)
    assert len(seq.levels) == 5 and seq.all_periodic, "(c) not periodic on every level"
    assert isinstance(detect_constancy(seq), NotConstantWithinDepth), "(c) constant"
    notes.append("(c) ok")

    types = {n: _perpendicular_types(n) for n in range(5)}
    wrong = {n: ts for n, ts in types.items() if not ts or any(t != "[c,lr]" for t in ts)}
    assert not wrong, f"(d) perpendicular basepoints are not of type [c,lr]: {wrong}"
    notes.append("(d) ok")
    return ", ".join(notes)


def test_compatible_sequences():
    _record(4, "compatible sequences on KS and T", check_compat)


# -- 5. odd-b hybrid sampler ---------------------------------------------------

def bodd_candidates():
    out = []
    for a in (1, 2, 3):
        for b in (1, 3, 5):
            for s in (1, 2):
                for r in range(1, 4 ** s, 2):
                    out.append((F(a), b, F(r, 4 ** s)))
    for b in (1, 3, 5):
        for s in (1, 2, 3):
            for r in range(1, 2 ** s, 2):
                out.append((F(1, 2), b, F(r, 2 ** s)))
    return out


def bodd_sample(k: int = 20, seed: int = 20260):
    return random.Random(seed).sample(bodd_candidates(), k)


def bodd_levels(a, b, x0, depth: int = 3):
    verdict = thm_bodd_condition(a, b, x0)
    seq = build_sequence(Family.KOCH, State(_pt(x0), verdict.direction), 0, depth)
    hybrid = [classify_hybrid(build_koch_snowflake(lv.level), lv.orbit) for lv in seq.levels]
    return verdict, seq, hybrid


def check_bodd_sampler():
    failures = []
    for a, b, x0 in bodd_sample():
        verdict, seq, hybrid = bodd_levels(a, b, x0)
        assert verdict.applicable, (a, b, x0)
        ok = (len(seq.levels) == 4 and seq.all_periodic and all(h.is_hybrid for h in hybrid))
        if not ok:
            failures.append(f"a={a} b={b} x0={x0} "
                            f"({seq.truncated or [str(s.value) for s in seq.statuses]})")
    assert not failures, f"{len(failures)}/20 triples fail: " + "; ".join(failures)
    return "20/20 triples periodic and hybrid on levels 0..3"


def test_odd_b_sampler_gives_periodic_hybrid_orbits():
    _record(5, "odd-b direction sampler", check_bodd_sampler)


# -- 6. T-fractal slopes -------------------------------------------------------

def _t_starts():
    return [F(t, 3 ** k) for k in (1, 2, 3) for t in range(1, 2 * 3 ** k) if t % 3]


def _dyadic(x: F) -> bool:
    return x.denominator & (x.denominator - 1) == 0


def _brute_dyadic_hit(x0: F, m: F, exp: int = 5, span: int = 3) -> bool:
    den = 2 ** exp
    return any(_dyadic(m * (F(j, den) - x0)) for j in range(-span * den, span * den + 1))


def check_t_slopes():
    slopes = sorted({admissible_slope(g, a, b) for g in range(5) for a in range(5)
                     for b in range(5)})
    starts = _t_starts()
    for x0 in starts:
        for m in slopes:
            assert not t_slope_forbidden(x0, m), (x0, m)
    rng = random.Random(6)
    for _ in range(200):
        x0, m = rng.choice(starts), rng.choice(slopes)
        assert not _brute_dyadic_hit(x0, m), (x0, m)
    witnessed = 0
    while witnessed < 50:
        x0 = rng.choice(starts)
        p, q = rng.randint(-20, 20), rng.randint(1, 20)
        r, s = rng.randint(0, 4), rng.randint(0, 4)
        try:
            m = eq41_slope(x0, p, q, r, s)
        except ZeroDivisionError:
            continue
        assert m * (F(p, 2 ** r) - x0) == F(q, 2 ** s)
        hit = t_slope_witness(x0, m)
        assert hit is not None, (x0, m)
        x, y = hit
        assert _dyadic(x) and _dyadic(y) and y == m * (x - x0)
        witnessed += 1
    return (f"{len(slopes)} admissible slopes x {len(starts)} starts clear, "
            f"50 forbidden slopes witnessed")


def test_t_fractal_slope_oracles():
    _record(6, "T-fractal dyadic slope oracles", check_t_slopes)


# -- 7. carpet slope sets ----------------------------------------------------------

def brute_slope_sets(a: int):
    A, B = set(), set()
    for p in range(0, a + 1):
        for q in range(1, a + 1):
            if p + q <= a and p < q <= a - 1 and (p + q) % 2 == 1:
                A.add(F(p, q))
            if p + q <= a - 1 and p <= q <= a - 2 and p % 2 == 1 and q % 2 == 1:
                B.add(F(p, q))
    return A, B


def check_slope_sets():
    odd = range(3, 16, 2)
    for a in odd:
        A, B = brute_slope_sets(a)
        got = slope_sets(a)
        assert set(got.A) == A and set(got.B) == B, a
    assert F(2, 3) in slope_sets(7).A
    assert F(2, 3) in slope_sets(5).all
    for b in odd:
        for a in odd:
            if b <= a:
                assert slope_sets(b).A <= slope_sets(a).A
                assert slope_sets(b).B <= slope_sets(a).B
    return "a = 3..15 match enumeration, monotone"


def test_carpet_slope_sets():
    _record(7, "carpet slope sets", check_slope_sets)


# -- 8. carpet avoidance and orbits ---------------------------------------------

def carpet_choices():
    return [(a, k, p, alpha) for a in (3, 5, 7) for k in (0, 1)
            for p in range(1, a ** k + 1, 2) for alpha in sorted(slope_sets(a).B)]


def check_carpet():
    for a in (3, 5, 7):
        for alpha in slope_sets(a).B:
            res = segment_avoids_peripherals((F(1, 2), 0), alpha, a, 4)
            assert isinstance(res, Avoids), (a, alpha, str(res))
    picks = random.Random(8).sample(carpet_choices(), 10)
    for a, k, p, alpha in picks:
        seq = constant_carpet_sequence(a, k, p, alpha, 3)
        assert seq.all_periodic and len(seq.levels) == 4 - k, (a, k, p, alpha)
        assert isinstance(detect_constancy(seq), ConstantFrom), (a, k, p, alpha)
    check = alpha_in_A_orbit_check(7, F(2, 3))
    assert isinstance(check, ValidOrbitOfSa)
    two = run_orbit(build_carpet(7, 2), State(_pt(0), slope_direction(F(2, 3))), 5000)
    assert two.is_periodic and two.basepoints == check.path
    assert isinstance(segment_avoids_peripherals((0, 0), F(2, 3), 7, 2), Avoids)
    return f"B-slopes avoid to depth 4, {len(picks)} sequences constant, a=7 path period {two.period}"


def test_carpet_avoidance_and_orbits():
    _record(8, "carpet avoidance and orbits", check_carpet)


# -- 9. unfolding ---------------------------------------------------------------

def periodic_samples(count: int = 100, seed: int = 9):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        fam = Family.SQUARE if len(out) % 2 == 0 else Family.TRIANGLE
        table = build_square(1) if fam is Family.SQUARE else build_triangle(1)
        x0 = F(rng.randint(1, 23), 24)
        if fam is Family.SQUARE:
            d = Vec(Q(rng.randint(-4, 4)), Q(rng.randint(1, 4)))
        else:
            m, n = rng.randint(-4, 4), rng.randint(1, 4)
            d = Vec(Q(F(2 * m + n, 2)), Q(0, F(n, 2)))
        orbit = run_orbit(table, State(_pt(x0), d), 400)
        if orbit.is_periodic:
            out.append((fam, table, orbit))
    return out


def check_unfolding():
    rng = random.Random(99)
    for fam, table, orbit in periodic_samples():
        un = unfold_orbit(table, orbit)
        assert un.is_collinear(), (fam, orbit.init)
        assert un.n_copies == orbit.period, (fam, orbit.init)
        s = rng.choice((2, 3))
        big = build_square(s) if fam is Family.SQUARE else build_triangle(s)
        big_orbit = reflect_unfold(table, orbit, big)
        assert big_orbit.is_periodic, (fam, orbit.init, s)
        folded = fold_orbit(big, big_orbit, table)
        assert repeats(orbit, folded, s), (fam, orbit.init, s)
    return "100 orbits collinear with copies = period, fold round trips exact"


def test_unfolding_and_folding():
    _record(9, "unfolding and folding", check_unfolding)


# -- 10. nontrivial paths -----------------------------------------------------------

KS_PATH_SEED = State(_pt(F(1, 2)), Vec(Q(5), Q(0, 1)))
T_PATH_SEED = State(_pt(F(4, 3)), Vec(Q(1), Q(1)))


def check_paths():
    notes = []
    for fam, seed, per_level in ((Family.KOCH, KS_PATH_SEED, F(1, 3)),
                                 (Family.TFRACTAL, T_PATH_SEED, F(1, 2))):
        bound = per_level ** 4  # squared gap, two levels apart
        for s in (seed, mirrored_seed(seed)):
            path = build_nontrivial_path(fam, s, 6)
            assert len(path.levels) == 7
            assert all(lv.vertex_class not in (PointClass.CANTOR_POINT,
                                               PointClass.SMOOTH_FRACTAL_POINT)
                       for lv in path.levels)
            assert path.decay_ratios, fam
            assert all(r <= bound for r in path.decay_ratios), (fam, path.decay_ratios)
        notes.append(f"{fam.value} ratios {sorted(set(map(str, path.decay_ratios)))}")
    return ", ".join(notes)


def test_nontrivial_twin_paths():
    _record(10, "nontrivial twin paths", check_paths)


CHECKS = [(1, "exact reflection law and reversibility", check_reflection_law),
          (2, "perimeter, side count, height and area", check_geometry),
          (3, "ternary addresses and types", check_ternary),
          (4, "compatible sequences on KS and T", check_compat),
          (5, "odd-b direction sampler", check_bodd_sampler),
          (6, "T-fractal dyadic slope oracles", check_t_slopes),
          (7, "carpet slope sets", check_slope_sets),
          (8, "carpet avoidance and orbits", check_carpet),
          (9, "unfolding and folding", check_unfolding),
          (10, "nontrivial twin paths", check_paths)]


if __name__ == "__main__":
    for number, title, fn in CHECKS:
        try:
            _record(number, title, fn)
        except Exception:
            pass
