import math

import pytest
from hypothesis import given, settings, strategies as st

from icp.angles import AngleData
from icp.complex import CellComplex, generate_keyexample, generate_lattice
from icp.conditions import (
    check_c1,
    check_conditions,
    curvature_target_feasible,
    face_degree_bound,
    feasibility_min_cut,
    min_nonfacial_cycle,
)
from icp.errors import EpsilonZero, TooManyInteriorVertices

from oracles import nonfacial_cycles, subset_feasible


def test_face_residuals():
    sq = CellComplex([(0, 1, 2, 3)])
    tri = CellComplex([(0, 1, 2)])
    assert check_c1(sq, AngleData.constant(sq.edges, math.pi / 2)).worst == pytest.approx(0, abs=1e-15)
    assert check_c1(tri, AngleData.constant(tri.edges, math.pi / 3)).passed
    rep = check_c1(sq, AngleData.constant(sq.edges, math.pi / 3))
    assert not rep.passed
    assert rep.residuals[0] == pytest.approx(2 * math.pi / 3)


def test_single_face_has_no_nonfacial_cycle():
    c = CellComplex([(0, 1, 2, 3)])
    assert min_nonfacial_cycle(c, AngleData.constant(c.edges, math.pi / 2)) is None


def test_wheel_rim_is_lightest(w8):
    c, a = w8
    w, cyc = min_nonfacial_cycle(c, a)
    assert sorted(cyc) == list(range(1, 9))
    assert w == pytest.approx(2 * math.pi + 0.25, abs=1e-12)


def test_two_triangles_fail():
    c = CellComplex([(0, 1, 2), (0, 2, 3)])
    a = AngleData.constant(c.edges, 5 * math.pi / 6)
    w, cyc = min_nonfacial_cycle(c, a)
    assert w == pytest.approx(2 * math.pi / 3)
    assert len(cyc) == 4
    assert not check_conditions(c, a).c2_passed


@pytest.mark.parametrize("kind,size", [("square", 3), ("deg7", 1), ("wheel", 6)])
def test_nonfacial_cycle_matches_enumeration(kind, size):
    c, a = generate_lattice(kind, size)
    best = min(w for w, _ in nonfacial_cycles(c, a))
    assert min_nonfacial_cycle(c, a)[0] == pytest.approx(best, abs=1e-12)


def test_face_degree_bound():
    assert face_degree_bound(epsilon=math.pi / 2) == 4
    assert face_degree_bound(epsilon=2 * math.pi / 3) == 3
    with pytest.raises(EpsilonZero):
        face_degree_bound(epsilon=0.0)


def test_feasibility_examples(w8):
    c, a = w8
    assert curvature_target_feasible(c, a)[0]
    ok, wit = curvature_target_feasible(c, a, {0: 2 * math.pi})
    assert not ok and wit == {0}
    # the single-vertex inequality is tight at K = 2π - 2ΣΘ
    tight = 2 * math.pi - 2 * sum(a[(0, k)] for k in range(1, 9))
    assert curvature_target_feasible(c, a, {0: tight + 1e-9})[0]
    assert not curvature_target_feasible(c, a, {0: tight - 1e-9})[0]


def test_too_many_interior_vertices():
    c, a = generate_lattice("square", 6)
    with pytest.raises(TooManyInteriorVertices):
        curvature_target_feasible(c, a)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.floats(-6.0, 6.0), min_size=4, max_size=4), st.floats(0.3, 1.4))
def test_subset_search_matches_loop(ks, spoke):
    c = CellComplex([(0, 1, 2), (0, 2, 3), (0, 3, 4), (0, 4, 5), (0, 5, 1), (1, 5, 6), (1, 6, 7), (1, 7, 2)])
    a = AngleData({e: spoke if 0 in e else 1.1 for e in c.edges})
    k = dict(zip(c.interior_vertices, ks))
    expect = subset_feasible(c, a, k)
    assert curvature_target_feasible(c, a, k)[0] == expect
    assert feasibility_min_cut(c, a, k)[0] == expect


def test_min_cut_agrees_on_fixtures():
    for i in range(3):
        c, a = generate_keyexample(i)
        assert feasibility_min_cut(c, a)[0]
    c = CellComplex([(0, 1, 2), (0, 2, 3)])
    assert feasibility_min_cut(c, AngleData.constant(c.edges, 1.0))[0]
