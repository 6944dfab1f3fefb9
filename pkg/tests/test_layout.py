import math

import numpy as np
import pytest

from icp.angles import AngleData
from icp.complex import CellComplex, generate_keyexample, generate_lattice
from icp.errors import HasChord, PreconditionFailed
from icp.kernel import EUCLIDEAN, quad_geometry
from icp.layout import (
    audit_pattern,
    boundary_tangency_gap,
    check_embedding,
    develop,
    export_svg,
    from_sphere,
    gauss_bonnet_audit,
    lift_to_polyhedron,
    maple_audit,
    to_sphere,
)
from icp.solver import ConformalState, horocycle_limit, solve_dirichlet


@pytest.fixture(scope="module")
def wheel_pattern():
    c, a = generate_keyexample(0)
    st, _ = solve_dirichlet(c, a, 1.0)
    return develop(c, a, st)


@pytest.fixture(scope="module")
def lattice_pattern():
    c, a = generate_lattice("square", 8)
    st, _ = solve_dirichlet(c, a, 1.0)
    return develop(c, a, st)


def test_single_square_face():
    c = CellComplex([(0, 1, 2, 3)])
    a = AngleData.constant(c.edges, math.pi / 2)
    st = ConformalState(EUCLIDEAN, {v: math.log(math.sqrt(2)) for v in c.vertices})
    p = develop(c, a, st)
    P = p.dual_points[0]
    rel = sorted((round((p.centers[v] - P).real, 12), round((p.centers[v] - P).imag, 12)) for v in c.vertices)
    assert rel == [(-1.0, -1.0), (-1.0, 1.0), (1.0, -1.0), (1.0, 1.0)]
    assert check_embedding(p).embedded


def test_center_distances_match_kites(wheel_pattern):
    p = wheel_pattern
    for v, w in p.complex.edges:
        q = quad_geometry(EUCLIDEAN, p.radii[v], p.radii[w], p.angles[(v, w)])
        assert abs(p.centers[v] - p.centers[w]) == pytest.approx(q.l, rel=1e-12)


def test_lattice_centers_on_grid(lattice_pattern):
    z = np.array([lattice_pattern.centers[v] for v in lattice_pattern.complex.vertices]) / math.sqrt(2)
    assert np.max(np.abs(z - np.round(z.real) - 1j * np.round(z.imag))) < 1e-12


def test_embedding_checks(lattice_pattern):
    assert check_embedding(lattice_pattern).embedded
    assert check_embedding(lattice_pattern, brute_force=True).embedded
    c, a = lattice_pattern.complex, lattice_pattern.angles
    u = dict(lattice_pattern.state.u)
    v = c.interior_vertices[len(c.interior_vertices) // 2]
    u[v] += math.log(10)
    bad = develop(c, a, ConformalState(EUCLIDEAN, u), holonomy_tol=None)
    rep = check_embedding(bad)
    assert not rep.embedded and rep.violations


def test_angles_realized(wheel_pattern, lattice_pattern):
    for p in (wheel_pattern, lattice_pattern):
        aud = audit_pattern(p)
        assert aud.angle_error < 1e-12
        assert aud.concurrency_spread < 1e-12


def test_maple_clearance(lattice_pattern):
    full = maple_audit(lattice_pattern, math.pi / 2)
    assert set(full) == set(lattice_pattern.complex.interior_vertices)
    assert min(full.values()) >= -1e-12
    half = maple_audit(lattice_pattern, math.pi / 2, shrink=0.5)
    assert all(half[v] >= full[v] for v in full)


def test_svg_elements(wheel_pattern):
    svg = export_svg(wheel_pattern)
    assert svg.count('class="circle"') == 9
    assert svg.count('class="dual"') == 8
    only = export_svg(wheel_pattern, layers=())
    assert only.count('class="circle"') == 9 and 'class="dual"' not in only


def test_hyperbolic_pattern_tangent_to_frame():
    c, a = generate_keyexample(0)
    p = develop(c, a, horocycle_limit(c, a).state)
    assert boundary_tangency_gap(p) < 1e-12
    assert check_embedding(p).embedded
    assert 'class="frame"' in export_svg(p)


def test_stereographic_round_trip():
    rng = np.random.default_rng(2)
    z = rng.normal(size=200) * 3 + 1j * rng.normal(size=200) * 3
    back = np.array([from_sphere(to_sphere(x)) for x in z])
    assert np.max(np.abs(back - z)) < 1e-12


def test_lift_dihedrals(wheel_pattern, lattice_pattern):
    lift = lift_to_polyhedron(wheel_pattern)
    assert len(lift.ideal_vertices) == 8
    assert lift.max_dihedral_error < 1e-9
    lat = lift_to_polyhedron(lattice_pattern)
    assert max(abs(d - math.pi / 2) for d in lat.dihedral.values()) < 1e-9
    obj = lift.to_obj()
    assert obj.count("\nv ") + obj.startswith("v ") == 8


def test_gauss_bonnet_on_rim(wheel_pattern):
    rep = gauss_bonnet_audit(wheel_pattern, list(range(1, 9)))
    assert rep.residual < 1e-12
    assert rep.angle_sum == pytest.approx(0.25, abs=1e-12)
    assert rep.exterior_excess == pytest.approx(0.25, abs=1e-12)


def test_gauss_bonnet_preconditions(lattice_pattern):
    with pytest.raises(PreconditionFailed):
        gauss_bonnet_audit(lattice_pattern, list(lattice_pattern.complex.faces[0]))
    # around two adjacent squares the shared edge is a chord
    with pytest.raises(HasChord):
        gauss_bonnet_audit(lattice_pattern, [0, 1, 2, 11, 10, 9])
