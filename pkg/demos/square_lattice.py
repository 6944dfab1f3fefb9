"""Solve a square patch with unit boundary radii, lay it out and lift it.

Every interior circle comes back with radius 1 and the centers land on
a √2-spaced grid.  Writes square.svg and square.obj into the output dir.
"""

import sys
from pathlib import Path

from icp import check_embedding, develop, export_svg, generate_lattice, lift_to_polyhedron, solve_dirichlet
from icp.layout import audit_pattern

out = Path(sys.argv[1] if len(sys.argv) > 1 else "demo-out")
out.mkdir(exist_ok=True)

c, a = generate_lattice("square", 10)
state, report = solve_dirichlet(c, a, 1.0)
print(f"newton: {report.iterations} iterations, residual {report.residual:.2e}")
print("largest |r - 1|:", max(abs(state.radius(v) - 1) for v in c.interior_vertices))

p = develop(c, a, state)
audit = audit_pattern(p)
print("embedded:", check_embedding(p).embedded)
print(f"angle error {audit.angle_error:.1e}, concurrency spread {audit.concurrency_spread:.1e}")

export_svg(p, out / "square.svg", layers=("circles", "dual", "quads"))
lift = lift_to_polyhedron(p)
lift.to_obj(out / "square.obj")
print(f"lift: {len(lift.ideal_vertices)} ideal vertices, dihedral error {lift.max_dihedral_error:.1e}")
