import math

import pytest

from icp.complex import (
    Deg7Generator,
    KeyexampleGenerator,
    SquareLatticeGenerator,
    build_complex,
    classify_boundary,
    exhaust,
    generate_keyexample,
    generate_lattice,
    subdivide,
)
from icp.errors import FacesShareTwoEdges, FaceTooSmall, NonManifoldEdge


def euler(c):
    return len(c.vertices) - len(c.edges) + len(c.faces)


def test_single_face_counts():
    c = build_complex([(0, 1, 2, 3)])
    assert (len(c.vertices), len(c.edges), len(c.faces)) == (4, 4, 1)
    assert euler(c) == 1
    assert c.interior_vertices == ()


def test_wheel_counts(w8):
    c, _ = w8
    assert (len(c.vertices), len(c.edges), len(c.faces)) == (9, 16, 8)
    interior, boundary, _, _ = classify_boundary(c)
    assert interior == {0}
    assert boundary == set(range(1, 9))
    assert c.outer_boundary({0}) == set(range(1, 9))


def test_faces_sharing_two_edges_rejected():
    with pytest.raises(FacesShareTwoEdges):
        build_complex([(0, 1, 2, 3), (0, 1, 4, 3)])


def test_small_face_and_nonmanifold_rejected():
    with pytest.raises(FaceTooSmall):
        build_complex([(0, 1)])
    with pytest.raises(NonManifoldEdge):
        build_complex([(0, 1, 2), (0, 1, 3), (0, 1, 4)])


def test_orientation_made_consistent():
    c = build_complex([(0, 1, 2), (0, 2, 3)][::-1] + [(3, 2, 4)])
    seen = set()
    for f in c.faces:
        for k in range(len(f)):
            h = (f[k], f[(k + 1) % len(f)])
            assert h not in seen
            seen.add(h)


def test_subdivision_counts(w8):
    c = build_complex([(0, 1, 2, 3)])
    t = subdivide(c).triangulation
    assert len(t.vertices) == 5 and len(t.faces) == 4
    assert len(t.neighbors[4]) == 4
    c, _ = w8
    s = subdivide(c)
    assert len(s.triangulation.vertices) == 17
    assert len(s.triangulation.faces) == 24
    bound = max(2 * c.max_degree(), max(len(f) for f in c.faces))
    assert s.triangulation.max_degree() <= bound


def test_square_lattice_levels():
    gen = SquareLatticeGenerator()
    for n in (0, 1):
        lev = exhaust(gen, None, n)
        assert len(lev.complex.vertices) == 9
        assert len(lev.complex.faces) == 4
    sizes = [len(exhaust(gen, None, n).complex.vertices) for n in range(1, 6)]
    assert sizes == [9, 25, 49, 81, 121]
    assert exhaust(gen, None, 2).includes_into(exhaust(gen, None, 3))


def test_deg7_interior_degree():
    c, a = generate_lattice("deg7", 3)
    assert all(len(c.neighbors[v]) == 7 for v in c.interior_vertices)
    gen = Deg7Generator()
    lev = exhaust(gen, None, 3)
    assert all(len(lev.complex.neighbors[v]) == 7 for v in lev.complex.interior_vertices)


def test_square_lattice_fixture():
    c, a = generate_lattice("square", 2)
    assert len(c.faces) == 4 and len(c.vertices) == 9
    for f in c.faces:
        assert math.fsum(math.pi - a[(f[k], f[(k + 1) % 4])] for k in range(4)) == pytest.approx(2 * math.pi)


def test_keyexample_level0_angles():
    d0 = 0.25
    c, a = generate_keyexample(0, [d0])
    for k in range(1, 9):
        assert a[(0, k)] == pytest.approx((2 * math.pi + d0) / 16, abs=1e-15)
        assert a[(k, k % 8 + 1)] == pytest.approx((6 * math.pi - d0) / 8, abs=1e-15)


@pytest.mark.parametrize("i", range(4))
def test_keyexample_boundary_length(i):
    c, a = generate_keyexample(i)
    assert len(c.boundary_edges) == 2 ** (3 + 2 * i)
    assert euler(c) == 1


def test_keyexample_levels_nested():
    gen = KeyexampleGenerator()
    c1, _ = gen.level(1)
    c2, _ = gen.level(2)
    assert {frozenset(f) for f in c1.faces} <= {frozenset(f) for f in c2.faces}


def test_keyexample_generator_exhaust_matches_levels():
    gen = KeyexampleGenerator()
    lev = exhaust(gen, None, 2)
    c, _ = generate_keyexample(2)
    assert lev.complex.same_combinatorics(c)
