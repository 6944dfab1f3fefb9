"""Independent reference computations used by the tests.

Nothing here calls into the package's numerical code: each oracle uses a
different formula or a different solver from the implementation it checks.
"""

import itertools
import math

import networkx as nx
import numpy as np


def central_difference(f, x, h=1e-6):
    return (f(x + h) - f(x - h)) / (2 * h)


def kite_angle_arccos(r_v, r_w, theta):
    """Euclidean kite angle at v from the law of cosines."""
    l = math.sqrt(r_v * r_v + r_w * r_w + 2 * r_v * r_w * math.cos(theta))
    return 2 * math.acos(max(-1.0, min(1.0, (r_v + r_w * math.cos(theta)) / l)))


def bisect(f, lo, hi, tol=1e-15, max_iter=200):
    flo = f(lo)
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
        if hi - lo < tol * max(1.0, abs(mid)):
            break
    return 0.5 * (lo + hi)


def wheel_hub_radius(spoke, n=8, rim=1.0):
    """Hub radius with n equal rim circles: n·α(r_hub, rim, spoke) = 2π."""
    return bisect(lambda r: n * kite_angle_arccos(r, rim, spoke) - 2 * math.pi, 1e-6, 1e6)


def nonfacial_cycles(c, a):
    """Every simple cycle of the 1-skeleton that is not a face, with its weight."""
    g = nx.Graph()
    g.add_edges_from(c.edges)
    faces = {frozenset(f) for f in c.faces}
    out = []
    for cyc in nx.simple_cycles(g):
        if len(cyc) < 3 or frozenset(cyc) in faces:
            continue
        n = len(cyc)
        out.append((sum(math.pi - a[(cyc[k], cyc[(k + 1) % n])] for k in range(n)), cyc))
    return out


def subset_feasible(c, a, k):
    """Plain loop over every nonempty subset of interior vertices."""
    interior = list(c.interior_vertices)
    for size in range(1, len(interior) + 1):
        for A in itertools.combinations(interior, size):
            As = set(A)
            lhs = sum(k.get(v, 0.0) for v in A)
            rhs = 2 * math.pi * len(A) - 2 * sum(a[e] for e in c.edges if As & set(e))
            if not lhs > rhs:
                return False
    return True


def all_paths(g, V1, V2):
    """Vertex sets of simple V1-V2 paths whose inner vertices avoid V1 and V2 (networkx)."""
    V1, V2 = set(V1), set(V2)
    h = g.copy()
    src, dst = "_s", "_t"
    h.add_edges_from((src, v) for v in V1)
    h.add_edges_from((v, dst) for v in V2)
    out = set()
    for p in nx.all_simple_paths(h, src, dst):
        inner = p[1:-1]
        if sum(v in V1 for v in inner) == 1 and sum(v in V2 for v in inner) == 1:
            out.add(frozenset(inner))
    return [set(p) for p in out]


def family_modulus_qp(family, vertices):
    """min Σ m² with Σ_{v∈γ} m_v >= 1 for each γ, via a conic solver."""
    import cvxpy as cp

    vertices = sorted(vertices)
    if not family:
        return 0.0
    pos = {v: i for i, v in enumerate(vertices)}
    m = cp.Variable(len(vertices), nonneg=True)
    cons = [cp.sum(m[[pos[v] for v in sorted(g)]]) >= 1 for g in family]
    prob = cp.Problem(cp.Minimize(cp.sum_squares(m)), cons)
    prob.solve(solver=cp.CLARABEL)
    return float(prob.value)


def minimal_transversals(family, vertices):
    """Minimal vertex sets meeting every member of the family."""
    vertices = sorted(vertices)
    fam = [frozenset(g) for g in family]
    found = []
    for size in range(1, len(vertices) + 1):
        for S in itertools.combinations(vertices, size):
            Ss = frozenset(S)
            if any(t <= Ss for t in found):
                continue
            if all(Ss & g for g in fam):
                found.append(Ss)
    return [set(t) for t in found]


def series_divider(conductances):
    """Potentials along a path of resistors 1/ω_j held at 0 and 1."""
    res = np.cumsum([1.0 / w for w in conductances])
    return [0.0] + list(res / res[-1])
