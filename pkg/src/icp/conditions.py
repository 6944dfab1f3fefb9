"""Angle conditions on a complex.

Face condition: every face has exterior angle sum Σ(π - Θ) = 2π.
Cycle condition: every simple closed edge cycle that is not a face
boundary has exterior sum > 2π, optionally with a uniform margin.
Also the face-degree bound implied by the face condition and the subset
inequalities that decide whether a curvature target is reachable.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field

import numpy as np

from .angles import AngleData, edge_key
from .errors import EpsilonZero, MissingAngle, TooManyInteriorVertices

TWO_PI = 2 * math.pi


@dataclass
class C1Report:
    residuals: dict
    passed: bool
    tol: float

    @property
    def worst(self) -> float:
        return max((abs(r) for r in self.residuals.values()), default=0.0)


def check_c1(c, a: AngleData, tol: float = 1e-9) -> C1Report:
    """Residual Σ_{e<f}(π - Θ(e)) - 2π for every face index."""
    res = {}
    for i, f in enumerate(c.faces):
        n = len(f)
        res[i] = math.fsum(math.pi - a[(f[k], f[(k + 1) % n])] for k in range(n)) - TWO_PI
    return C1Report(res, all(abs(r) <= tol for r in res.values()), tol)


# -- non-facial cycles --------------------------------------------------------


def _weights(c, a):
    adj = {v: [] for v in c.vertices}
    for e in c.edges:
        if e not in a:
            raise MissingAngle(f"no angle for edge {e}")
        w = math.pi - a[e]
        adj[e[0]].append((e[1], w))
        adj[e[1]].append((e[0], w))
    return adj


def _dijkstra_path(adj, src, dst, banned, bound):
    """Shortest src->dst path avoiding banned edges, or None if none below bound."""
    dist = {src: 0.0}
    prev = {}
    heap = [(0.0, src)]
    while heap:
        d, v = heapq.heappop(heap)
        if d > dist.get(v, math.inf):
            continue
        if d >= bound:
            return None
        if v == dst:
            path = [v]
            while v != src:
                v = prev[v]
                path.append(v)
            return d, path[::-1]
        for w, wt in adj[v]:
            if edge_key(v, w) in banned:
                continue
            nd = d + wt
            if nd < dist.get(w, math.inf):
                dist[w] = nd
                prev[w] = v
                heapq.heappush(heap, (nd, w))
    return None


def min_nonfacial_cycle(c, a: AngleData):
    """Lightest simple closed cycle that is not a face boundary.

    Returns ``(weight, cycle)`` with ``cycle`` a vertex list (closing edge
    implied), or None when every cycle is facial.  Weight is Σ(π - Θ).

    Per edge e = vw: the lightest v->w path avoiding e closes a cycle
    through e.  If that path runs around a face containing e, one of its
    edges is banned and the search repeated; at most two faces contain e,
    so the branching is shallow.
    """
    adj = _weights(c, a)
    face_paths = {}
    for f in c.faces:
        n = len(f)
        fedges = frozenset(edge_key(f[k], f[(k + 1) % n]) for k in range(n))
        for e in fedges:
            face_paths.setdefault(e, []).append(fedges - {e})

    best = [math.inf, None]

    def search(e, banned):
        v, w = e
        phi_e = math.pi - a[e]
        found = _dijkstra_path(adj, v, w, banned, best[0] - phi_e)
        if found is None:
            return
        d, path = found
        pedges = frozenset(edge_key(path[k], path[k + 1]) for k in range(len(path) - 1))
        if pedges in face_paths.get(e, ()):
            for x in sorted(pedges):
                search(e, banned | {x})
            return
        total = d + phi_e
        if total < best[0]:
            best[0], best[1] = total, path

    for e in c.edges:
        search(e, frozenset({e}))
    if best[1] is None:
        return None
    return best[0], best[1]


def face_degree_bound(a: AngleData | None = None, epsilon: float | None = None) -> int:
    """floor(2π/ε) with ε = π - sup Θ; bounds the degree of every face under the face condition."""
    if epsilon is None:
        epsilon = math.pi - a.sup
    if not epsilon > 1e-12:
        raise EpsilonZero("sup of the angles is pi; no face-degree bound")
    return int(math.floor(TWO_PI / epsilon + 1e-9))


@dataclass
class ConditionReport:
    c1_residuals: dict
    c1_passed: bool
    min_nonfacial_cycle: tuple | None
    c2_passed: bool
    c2_margin: float | None
    face_degree_bound: int | None
    notes: list = field(default_factory=list)


def check_conditions(c, a: AngleData, tol: float = 1e-9) -> ConditionReport:
    a.check_defined_on(c)
    c1 = check_c1(c, a, tol)
    cyc = min_nonfacial_cycle(c, a)
    margin = None if cyc is None else cyc[0] - TWO_PI
    try:
        bound = face_degree_bound(a)
    except EpsilonZero:
        bound = None
    notes = []
    if bound is not None and c1.passed:
        big = [i for i, f in enumerate(c.faces) if len(f) > bound]
        if big:
            notes.append(f"faces exceed the degree bound: {big[:5]}")
    return ConditionReport(
        c1.residuals, c1.passed, cyc, margin is None or margin > 0, margin, bound, notes
    )


# -- curvature feasibility ----------------------------------------------------


def _subset_slack(c, a, k_target, interior):
    """Vectorized slack Σ_A K - 2π|A| + 2Σ_{E(A)}Θ over all nonempty subsets."""
    n = len(interior)
    pos = {v: i for i, v in enumerate(interior)}
    K = np.array([k_target.get(v, 0.0) for v in interior])
    ebits, etheta = [], []
    for e in c.edges:
        m = 0
        for x in e:
            if x in pos:
                m |= 1 << pos[x]
        if m:
            ebits.append(m)
            etheta.append(a[e])
    ebits = np.array(ebits, dtype=np.int64)
    etheta = np.array(etheta)
    best = (math.inf, None)
    total = 1 << n
    chunk = 1 << 16
    for start in range(1, total, chunk):
        masks = np.arange(start, min(total, start + chunk), dtype=np.int64)
        bits = (masks[:, None] >> np.arange(n)) & 1
        lhs = bits @ K
        cover = (masks[:, None] & ebits[None, :]) != 0
        slack = lhs - TWO_PI * bits.sum(axis=1) + 2 * (cover @ etheta)
        k = int(np.argmin(slack))
        if slack[k] < best[0]:
            best = (float(slack[k]), int(masks[k]))
    return best


def curvature_target_feasible(c, a: AngleData, k_target=None, max_interior: int = 20):
    """Decide reachability of a curvature target by brute force over subsets.

    Returns ``(feasible, witness)``; the witness is the most violated subset
    (or the offending single vertex) and None when feasible.
    """
    k_target = dict(k_target or {})
    interior = list(c.interior_vertices)
    if len(interior) > max_interior:
        raise TooManyInteriorVertices(
            f"{len(interior)} interior vertices; use min_nonfacial_cycle for the zero target "
            "or feasibility_min_cut"
        )
    for v in interior:
        if not k_target.get(v, 0.0) < TWO_PI:
            return False, {v}
    if not interior:
        return True, None
    slack, mask = _subset_slack(c, a, k_target, interior)
    if slack > 0:
        return True, None
    return False, {v for i, v in enumerate(interior) if mask >> i & 1}


def feasibility_min_cut(c, a: AngleData, k_target=None, eta: float = 1e-9):
    """Subset inequalities via a single minimum cut, for large complexes.

    g(A) = Σ_A K - 2π|A| + 2Σ_{E(A)}Θ is submodular, so its minimum over
    subsets is a max-weight closure problem.  Subtracting η|A| makes the
    empty set the unique minimizer exactly when every nonempty A has
    g(A) >= η|A| > 0.  Returns ``(feasible, witness, min_value)``.
    """
    import networkx as nx

    k_target = dict(k_target or {})
    interior = set(c.interior_vertices)
    for v in sorted(interior):
        if not k_target.get(v, 0.0) < TWO_PI:
            return False, {v}, TWO_PI - k_target.get(v, 0.0)
    if not interior:
        return True, None, 0.0
    G = nx.DiGraph()
    profit = 0.0
    for v in interior:
        p = TWO_PI - k_target.get(v, 0.0) + eta
        G.add_edge("s", ("v", v), capacity=p)
        profit += p
    for e in c.edges:
        if e[0] in interior or e[1] in interior:
            G.add_edge(("e", e), "t", capacity=2 * a[e])
            for x in e:
                if x in interior:
                    G.add_edge(("v", x), ("e", e))
    cut, (src_side, _) = nx.minimum_cut(G, "s", "t")
    value = cut - profit  # min over A of g(A) - η|A|
    chosen = {node[1] for node in src_side if isinstance(node, tuple) and node[0] == "v"}
    if chosen and value < 0:
        return False, chosen, value + eta * len(chosen)
    return True, None, value

