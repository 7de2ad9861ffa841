import random
from fractions import Fraction as Fr

import pytest

from bigonkit import bigon as bg
from bigonkit.bigon import (LinePair, find_minimal_bigon, geometric_intersection_number,
                            incidence_levels, intersect_transverse, make_quasi_transverse,
                            region_contains, remove_bigon, straighten_arc, straighten_loop,
                            verify_bigon)
from bigonkit.curves import PLLoop, PLPath, based_word, crossing_word
from bigonkit.errors import (ConstraintConflict, HypothesisViolated, Inessential,
                             NonTransverse, NotFreelyHomotopic, NotHomotopic)
from bigonkit.geometry import P, on_polyline
import laws

A = PLPath([(-6, 0), (-5, 0), (5, 0), (6, 0)])


def line(*mid):
    return PLPath([(-6, 0), (-5, 0)] + list(mid) + [(5, 0), (6, 0)])


def test_intersect_transverse_examples():
    d1, d2 = PLPath([(0, 0), (2, 2)]), PLPath([(0, 2), (2, 0)])
    (pt, sign), = intersect_transverse(d1, d2)
    assert pt == P(1, 1) and sign in (1, -1)
    assert intersect_transverse(PLPath([(0, 0), (2, 0)]), PLPath([(0, 1), (2, 1)])) == []
    with pytest.raises(NonTransverse):
        intersect_transverse(PLPath([(0, 0), (2, 0)]), PLPath([(1, 0), (3, 0)]))
    with pytest.raises(NonTransverse):
        intersect_transverse(PLPath([(0, 0), (2, 0)]), PLPath([(1, 1), (1, 0), (2, 1)]))


def test_intersect_transverse_sign_flips_with_direction():
    d1, d2 = PLPath([(0, 0), (2, 2)]), PLPath([(0, 2), (2, 0)])
    rev = PLPath([(2, 0), (0, 2)])
    assert intersect_transverse(d1, d2)[0][1] == -intersect_transverse(d1, rev)[0][1]


def test_line_pair_validation():
    with pytest.raises(HypothesisViolated):
        LinePair(A, PLPath([(-6, 0), (-5, 1), (5, 0), (6, 0)]))
    with pytest.raises(HypothesisViolated):
        LinePair(A, line((-1, 1), (1, -1), (1, 1), (-1, -1)))


def test_quasi_transverse_removes_overlap():
    pair = LinePair(A, line((-2, 1), (-1, 0), (1, 0), (2, 1)))
    out = make_quasi_transverse(pair, [(0, 3)], seed=1)
    assert out.alpha == pair.alpha
    hits = intersect_transverse(out.alpha, out.alpha_prime)
    assert len(hits) % 2 == 0
    assert based_word(out.alpha_prime, [(0, 3)]) == based_word(pair.alpha_prime, [(0, 3)])


def test_quasi_transverse_idempotent_on_valid_input():
    pair = LinePair(A, line((-1, 1), (0, -1), (1, 1)))
    assert make_quasi_transverse(pair) is pair


def test_quasi_transverse_resolves_tangency():
    F = [(Fr(1, 3), Fr(5, 2)), (Fr(-7, 3), -2)]
    pair = LinePair(A, line((-1, 2), (0, 0), (1, 2)))
    out = make_quasi_transverse(pair, F, seed=3)
    assert len(intersect_transverse(out.alpha, out.alpha_prime)) in (0, 2)
    assert based_word(out.alpha_prime, F) == based_word(pair.alpha_prime, F)


def test_find_bigon_lens():
    pair = LinePair(A, line((-3, 1), (-1, 1), (0, -1), (1, 1), (3, 1)))
    cert = find_minimal_bigon(pair)
    assert verify_bigon(pair.alpha, pair.alpha_prime, cert)


def test_find_bigon_blocked_by_puncture():
    lens = PLPath([(-6, 0), (-5, 0), (-4, 1), (-1, 1), (0, -2), (1, 1), (4, 1), (5, 0), (6, 0)])
    # punctures inside the lens below the axis and in both corner lenses above
    F = [(Fr(1, 10), -1), (-3, Fr(1, 2)), (3, Fr(1, 2))]
    assert find_minimal_bigon(LinePair(A, lens), F) is None
    assert find_minimal_bigon(LinePair(A, lens), []) is not None


def test_find_bigon_on_random_homotopic_pairs():
    for seed in range(40):
        assert laws.bigon_exists(random.Random(seed)) is None, seed


def test_verify_bigon_rejects_tampered_certificate():
    pair = LinePair(A, line((-3, 1), (-1, 1), (0, -1), (1, 1), (3, 1)))
    cert = find_minimal_bigon(pair)
    bad = bg.BigonCert(cert.face_id, cert.alpha_chain, cert.alpha_prime_chain, cert.corners,
                       cert.polygon + (P(0, -5),), cert.moving_arc, cert.corner_fixed)
    assert not verify_bigon(pair.alpha, pair.alpha_prime, bad)
    assert len(cert.polygon) == 3
    a, b, c = cert.polygon
    centroid = ((a.x + b.x + c.x) / 3, (a.y + b.y + c.y) / 3)
    assert not verify_bigon(pair.alpha, pair.alpha_prime, cert, [centroid])


def test_remove_single_lens():
    pair = LinePair(A, line((-3, 1), (-1, 1), (0, -1), (1, 1), (3, 1)))
    F = [(Fr(1, 3), -3), (Fr(1, 2), 4)]
    n0 = len(intersect_transverse(pair.alpha, pair.alpha_prime))
    cert = find_minimal_bigon(pair, F)
    new, step = remove_bigon(pair, cert, F)
    assert len(intersect_transverse(new.alpha, new.alpha_prime)) == n0 - 2
    assert step.components[0] > step.components[1]
    assert not any(region_contains(step.support, q) for q in F)
    assert based_word(new.alpha_prime, F) == based_word(pair.alpha_prime, F)


def test_remove_bigon_keeps_far_side_point_off_the_curve():
    pair = LinePair(A, PLPath([(-6, 0), (-5, 0), (-2, 1), (-1, 0), (0, -1), (1, 0), (2, 1),
                               (5, 0), (6, 0)]))
    cert = find_minimal_bigon(pair)
    # the chosen lens lies above the axis near x = -2; put a C point just below it
    assert P(-2, 1) in cert.polygon
    c = P(-2, Fr(-1, 1000))
    new, step = remove_bigon(pair, cert, C=[c])
    assert not on_polyline(list(new.alpha_prime.vertices), c)
    assert step.components == (4, 3)
    # the rerouted arc now passes below the axis, between it and nothing else
    assert any(q.y < 0 for q in step.after[1:-1])


def test_remove_bigon_maps_swept_cprime_points_off_c():
    pair = LinePair(A, line((-3, 1), (-1, 1), (0, -1), (1, 1), (3, 1)))
    cert = find_minimal_bigon(pair)
    inside = P(0, Fr(-1, 4))           # C' point swept by the bigon move
    shared = P(0, Fr(1, 100))          # in C and C', just on the far side
    new, step = remove_bigon(pair, cert, C=[shared, P(0, Fr(1, 50))], Cp=[inside, shared])
    assert shared in step.cprime
    assert P(0, Fr(1, 50)) not in step.cprime
    assert step.cprime[0] != inside


def test_remove_inner_of_nested_lenses():
    nested = line((-4, -3), (3, -3), (3, 1), (2, Fr(3, 2)), (1, 1), (1, -1), (-1, -1), (-1, 2),
                  (4, 2))
    pair = LinePair(A, nested)
    assert len(intersect_transverse(A, nested)) == 3
    cert = find_minimal_bigon(pair)
    assert set(cert.corners) == {P(-1, 0), P(1, 0)}
    new, step = remove_bigon(pair, cert)
    assert step.components == (5, 3)
    kept = [P(-4, -3), P(3, -3), P(3, 1), P(2, Fr(3, 2)), P(1, 1), P(-1, 2), P(4, 2)]
    assert all(q in new.alpha_prime.vertices for q in kept)


def test_constraint_conflict():
    pair = LinePair(A, line((-3, 1), (-1, 1), (0, -1), (1, 1), (3, 1)))
    cert = find_minimal_bigon(pair)
    # a C' point inside the lens must be pushed into the band beyond alpha, and a
    # C curve reaching down to within 10^-30 of alpha cuts that band at every
    # scale the halving budget tries
    wall = PLPath([(Fr(1, 4), Fr(1, 10**30)), (Fr(1, 4), 5)])
    with pytest.raises(ConstraintConflict):
        remove_bigon(pair, cert, C=[wall], Cp=[P(0, Fr(-1, 2))])
    # without a C' point to move, the same wall is no obstacle
    new, step = remove_bigon(pair, cert, C=[wall])
    assert step.components == (4, 2)
    assert not on_polyline(list(new.alpha_prime.vertices), P(Fr(1, 4), 5))


def test_straighten_single_bump():
    pair = LinePair(A, PLPath([(-6, 0), (-5, 0), (-2, Fr(-1, 2)), (-1, 1), (1, 1), (2, Fr(-1, 2)),
                               (5, 0), (6, 0)]))
    tr = straighten_arc(pair, [(0, 3)])
    kinds = [s.kind for s in tr.steps]
    assert tr.final.vertices == A.vertices
    assert kinds.count("final-coincidence") == 1 and kinds[-1] == "final-coincidence"


@pytest.mark.parametrize("k", [1, 2, 3, 5])
def test_straighten_independent_bumps(k):
    # alpha' runs below the axis except for k triangular bumps; each bump is a
    # three-sided lens, smaller than every other bigon, so the lenses go first
    mid = [(Fr(-9, 2), Fr(-1, 2))]
    for i in range(k):
        x0, w = Fr(-4) + Fr(8 * i, k), Fr(8, k)
        mid += [(x0 + w / 8, Fr(-1, 2)), (x0 + w / 2, 1), (x0 + 7 * w / 8, Fr(-1, 2))]
    mid.append((Fr(9, 2), Fr(-1, 2)))
    pair = LinePair(A, line(*mid))
    assert len(intersect_transverse(A, pair.alpha_prime)) == 2 * k
    tr = straighten_arc(pair, [(Fr(1, 7), -3)])
    assert [s.kind for s in tr.steps] == ["bigon-removal"] * k + ["final-coincidence"]
    assert tr.counts == tuple(range(2 * k + 2, 1, -2)) + (1,)
    assert tr.final.vertices == A.vertices


def test_straighten_other_side_of_puncture():
    pair = LinePair(A, line((-1, 2), (1, 2)))
    with pytest.raises(NotHomotopic) as e:
        straighten_arc(pair, [(0, 1)])
    # alpha' runs left to right above the puncture: one clockwise crossing
    assert e.value.to_json()["words"] == ["e", "x1"]


def test_straighten_rejects_constraint_on_alpha():
    pair = LinePair(A, line((-1, 2), (1, 2)))
    with pytest.raises(HypothesisViolated):
        straighten_arc(pair, [], C=[(0, 0)])
    with pytest.raises(HypothesisViolated):
        straighten_arc(pair, [], Cp=[PLPath([(0, 5), (1, 5)])])


def test_straighten_random_pairs():
    for seed in range(15):
        assert laws.straighten_law(random.Random(seed), budget=5.0) is None, seed


SQ = PLLoop([(-2, -2), (2, -2), (2, 2), (-2, 2)])
Q1 = (Fr(1, 3), Fr(1, 7))


def test_loop_concentric_squares():
    inner = PLLoop([(-1, -1), (1, -1), (1, 1), (-1, 1)])
    tr = straighten_loop(SQ, inner, [Q1])
    assert [s.kind for s in tr.steps] == ["final-coincidence"]
    assert tr.final.vertices == SQ.vertices
    with pytest.raises(NotFreelyHomotopic):
        straighten_loop(SQ, inner, [Q1, (Fr(3, 2), Fr(3, 2))])


def test_loop_crossing_rectangles():
    wide = PLLoop([(-3, -1), (3, -1), (3, 1), (-3, 1)])
    tr = straighten_loop(SQ, wide, [Q1])
    kinds = [s.kind for s in tr.steps]
    assert kinds[-1] == "final-coincidence" and "bigon-removal" in kinds
    assert tr.final.vertices == SQ.vertices
    removals = [s.components for s in tr.steps if s.kind == "bigon-removal"]
    assert all(a > b for a, b in removals)
    assert tr.counts[-1] == 1


def test_loop_errors():
    with pytest.raises(Inessential):
        straighten_loop(SQ, PLLoop([(5, 5), (6, 5), (6, 6)]), [Q1])
    with pytest.raises(NotFreelyHomotopic):
        straighten_loop(SQ, PLLoop(list(reversed(SQ.vertices))), [Q1])


def test_loop_with_pin():
    wide = PLLoop([(-3, -2), (3, -2), (3, 1), (-3, 1)])
    pin = (0, -2)
    tr = straighten_loop(SQ, wide, [Q1], pin=pin)
    assert tr.final.vertices[0] == P(*pin)
    for s in tr.steps:
        if s.kind == "bigon-removal":
            assert P(*pin) not in s.before[1:-1]


def test_gin_examples():
    F = [(-3, Fr(1, 3)), (3, Fr(-1, 3))]
    left = PLLoop([(-5, -1), (1, -1), (1, 1), (-5, 1)])
    right = PLLoop([(-1, -2), (5, -2), (5, 2), (-1, 2)])
    assert crossing_word(left, F) != crossing_word(right, F)
    assert len(intersect_transverse(left, right)) == 2
    for c2 in (right, PLLoop([(-1, -2), (5, -2), (5, 2), (-1, 2), (-1, 0), (1, 0), (1, -1),
                              (-1, Fr(-3, 2))])):
        assert geometric_intersection_number(left, c2, F) == 0
    pushed = PLLoop([(-3, -3), (3, -3), (3, 3), (-3, 3)])
    assert geometric_intersection_number(SQ, pushed, [Q1]) == 0


def test_gin_loop_against_separating_arc_is_seed_independent():
    F = [(-1, Fr(1, 3)), (1, Fr(-1, 3))]
    loop = PLLoop([(-3, -2), (3, -2), (3, 2), (-3, 2)])
    arc = PLPath([(-6, 0), (-4, 3), (-2, 1), (0, -3), (0, 3), (2, -1), (4, -3), (6, 0)])
    values = {geometric_intersection_number(loop, arc, F, seed=s) for s in range(5)}
    assert values == {2}


def test_gin_symmetric_on_loops():
    F = [Q1]
    wide = PLLoop([(-3, -1), (3, -1), (3, 1), (-3, 1)])
    assert geometric_intersection_number(SQ, wide, F) == geometric_intersection_number(wide, SQ, F)


def test_incidence_level_examples():
    arcs = [PLPath([(0, 3 * i), (4, 3 * i)]) for i in range(4)]
    own = [PLPath([(0, 3 * i), (2, 3 * i + 1), (4, 3 * i)]) for i in range(3)]
    assert incidence_levels(arcs[:3], own) == [[0, 1, 2]]
    chain = [PLPath([(0, 0), (2, 4), (4, 0)]), PLPath([(0, 3), (2, 7), (4, 3)]),
             PLPath([(0, 6), (2, 7), (4, 6)])]
    assert incidence_levels(arcs[:3], chain) == [[0], [1], [2]]
    star = [PLPath([(0, 0), (1, 10), (4, 0)])] + own[1:] + [own[0]]
    star[3] = PLPath([(0, 9), (2, 10), (4, 9)])
    assert incidence_levels(arcs, star) == [[0], [1, 2, 3]]


def test_incidence_levels_random_families():
    for seed in range(100):
        assert laws.levels_law(random.Random(seed)) is None, seed
