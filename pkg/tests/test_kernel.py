import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from icp.complex import CellComplex
from icp.angles import AngleData
from icp.errors import DomainError
from icp.kernel import (
    CIRCLE,
    EUCLIDEAN,
    HOROCYCLE,
    HYPERBOLIC,
    HYPERCYCLE,
    alpha_euclid,
    alpha_euclid_arccos,
    alpha_generalized,
    alpha_hyp,
    cone_angle_and_curvature,
    conformal_factor,
    dalpha_du,
    dalpha_generalized,
    edge_terms,
    extended_alpha,
    quad_geometry,
    radius_from_factor,
)
from icp.solver import ConformalState

from oracles import central_difference, kite_angle_arccos

radius = st.floats(0.05, 20.0)
angle = st.floats(0.1, math.pi - 0.1)


def test_orthogonal_values():
    assert alpha_euclid(1, 1, math.pi / 2) == pytest.approx(math.pi / 2, abs=1e-15)
    assert alpha_euclid(1, math.sqrt(3), math.pi / 2) == pytest.approx(2 * math.pi / 3, abs=1e-15)
    q = quad_geometry(EUCLIDEAN, 1, 1, math.pi / 2)
    assert q.l == pytest.approx(math.sqrt(2)) and q.d == pytest.approx(1 / math.sqrt(2))
    assert dalpha_du(EUCLIDEAN, 1, 1, math.pi / 2)[1] == pytest.approx(1.0)


def test_small_ratio_limit():
    for th in (0.3, 1.0, 2.5):
        assert alpha_euclid(1e-12, 1.0, th) == pytest.approx(2 * th, abs=1e-10)
        assert extended_alpha(0.0, th) == pytest.approx(2 * th)
        assert extended_alpha(np.inf, th) == 0.0


@settings(max_examples=200, deadline=None)
@given(radius, radius, angle)
def test_atan2_form_matches_law_of_cosines(rv, rw, th):
    assert alpha_euclid(rv, rw, th) == pytest.approx(kite_angle_arccos(rv, rw, th), abs=1e-12)
    assert alpha_euclid_arccos(rv, rw, th) == pytest.approx(kite_angle_arccos(rv, rw, th), abs=1e-12)


@settings(max_examples=200, deadline=None)
@given(radius, radius, angle)
def test_kite_angle_sum(rv, rw, th):
    q = quad_geometry(EUCLIDEAN, rv, rw, th)
    assert q.half_angles[0] + q.half_angles[1] + (math.pi - th) == pytest.approx(math.pi, abs=1e-12)
    assert 2 * q.half_angles[0] == pytest.approx(alpha_euclid(rv, rw, th), abs=1e-14)


@settings(max_examples=200, deadline=None)
@given(radius, radius, angle)
def test_euclidean_derivatives_cancel(rv, rw, th):
    dv, dw = dalpha_du(EUCLIDEAN, rv, rw, th)
    assert dv + dw == pytest.approx(0.0, abs=1e-14)
    assert dw > 0


def test_hyperbolic_equal_orthogonal():
    for r in (0.1, 1.0, 3.0):
        assert alpha_hyp(r, r, math.pi / 2) == pytest.approx(2 * math.atan(1 / math.cosh(r)), abs=1e-14)
        u = conformal_factor(CIRCLE, r)
        assert alpha_generalized(u, r, math.pi / 2) == pytest.approx(2 * math.atan(1 / math.cosh(r)), abs=1e-14)


def test_hyperbolic_small_radius_is_euclidean():
    s = 1e-6
    assert alpha_hyp(s, 2 * s, 1.0) == pytest.approx(alpha_euclid(1, 2, 1.0), rel=1e-9)


def test_horocycle_continuity():
    rw, th = 0.7, 1.2
    lim = 2 * math.atan2(math.sin(th), math.sinh(rw) + math.cos(th) * math.cosh(rw))
    for u in (-1e-9, 0.0, 1e-9):
        assert alpha_generalized(u, rw, th) == pytest.approx(lim, abs=1e-8)


def test_large_circle_has_small_angle():
    # the angle at a neighbour of a huge circle ... at the huge circle itself it shrinks to 0
    vals = [alpha_hyp(R, 1.0, 1.0) for R in (5.0, 10.0, 20.0)]
    assert vals[0] > vals[1] > vals[2] > 0
    assert vals[2] < 1e-6


def test_factor_limits():
    assert conformal_factor(CIRCLE, 40.0) > -1e-15
    assert conformal_factor(CIRCLE, 40.0) < 0
    assert conformal_factor(HYPERCYCLE, 1e-12) == pytest.approx(math.pi / 2)
    assert conformal_factor(HOROCYCLE) == 0.0
    assert conformal_factor(CIRCLE, 2.0, EUCLIDEAN) == pytest.approx(math.log(2))
    for kind, r in ((CIRCLE, 0.5), (CIRCLE, 7.0), (HYPERCYCLE, 0.3)):
        g = radius_from_factor(HYPERBOLIC, conformal_factor(kind, r))
        assert g.kind == kind and g.radius == pytest.approx(r, rel=1e-12)
    assert radius_from_factor(HYPERBOLIC, 0.0).kind == HOROCYCLE
    with pytest.raises(DomainError):
        radius_from_factor(HYPERBOLIC, 2.0)


def test_domain_errors():
    with pytest.raises(DomainError):
        alpha_euclid(-1, 1, 1.0)
    with pytest.raises(DomainError):
        alpha_euclid(1, 1, math.pi)


@settings(max_examples=100, deadline=None)
@given(st.floats(-4.0, 1.5), st.floats(0.05, 4.0), angle)
def test_generalized_derivative_by_differences(u, rw, th):
    if abs(u) < 1e-5:
        return  # the derivative has a kink-free but slope-zero point at the horocycle
    fd = central_difference(lambda x: alpha_generalized(x, rw, th), u)
    an = dalpha_generalized(u, rw, th)
    assert an == pytest.approx(fd, rel=1e-5, abs=1e-9)


@settings(max_examples=100, deadline=None)
@given(st.floats(-3.0, -0.05), st.floats(-3.0, 1.5), angle)
def test_edge_terms_by_differences(uv, uw, th):
    al, dv, dw = edge_terms(HYPERBOLIC, uv, uw, th)
    fv = central_difference(lambda x: float(edge_terms(HYPERBOLIC, x, uw, th)[0]), uv)
    fw = central_difference(lambda x: float(edge_terms(HYPERBOLIC, uv, x, th)[0]), uw)
    assert float(dv) == pytest.approx(fv, rel=1e-5, abs=1e-9)
    if abs(uw) > 1e-5:
        assert float(dw) == pytest.approx(fw, rel=1e-5, abs=1e-9)


def test_cone_angle_examples():
    c = CellComplex([(0, 1, 5, 2), (0, 2, 6, 3), (0, 3, 7, 4), (0, 4, 8, 1)])
    a = AngleData.constant(c.edges, math.pi / 2)
    st_ = ConformalState(EUCLIDEAN, {v: 0.0 for v in c.vertices})
    alpha, K = cone_angle_and_curvature(c, a, st_, 0)
    assert alpha == pytest.approx(2 * math.pi) and K == pytest.approx(0.0, abs=1e-15)
    shifted = ConformalState(EUCLIDEAN, {v: 0.3 * v + 1.7 for v in c.vertices})
    base = ConformalState(EUCLIDEAN, {v: 0.3 * v for v in c.vertices})
    assert cone_angle_and_curvature(c, a, shifted, 0)[1] == pytest.approx(cone_angle_and_curvature(c, a, base, 0)[1])
    t = CellComplex([(0, 1, 4, 2), (0, 2, 5, 3), (0, 3, 6, 1)])
    at = AngleData.constant(t.edges, math.pi / 2)
    assert cone_angle_and_curvature(t, at, ConformalState(EUCLIDEAN, {v: 0.0 for v in t.vertices}), 0)[1] == pytest.approx(math.pi / 2)
