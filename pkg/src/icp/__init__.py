"""Ideal circle patterns on disk cellular decompositions."""

from .angles import AngleData, edge_key
from .complex import (
    CellComplex,
    Deg7Generator,
    KeyexampleGenerator,
    SquareLatticeGenerator,
    build_complex,
    exhaust,
    generate_keyexample,
    generate_lattice,
    subdivide,
)
from .conditions import check_c1, check_conditions, feasibility_min_cut, min_nonfacial_cycle
from .kernel import EUCLIDEAN, HYPERBOLIC
from .layout import audit_pattern, check_embedding, develop, export_svg, lift_to_polyhedron
from .solver import ConformalState, horocycle_limit, solve_dirichlet

__version__ = "0.1.0"
