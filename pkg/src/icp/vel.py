"""Vertex extremal length.

A path's length under a vertex metric m counts every vertex on it,
endpoints included.  MOD(V1, V2) is the least area Σ m² of a metric
giving every V1-V2 path length at least 1; VEL = 1/MOD.
"""

from __future__ import annotations

import heapq
import itertools
import logging
import math
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla
from scipy.optimize import nnls

from .errors import BadNesting, SetsIntersect

log = logging.getLogger(__name__)


def adjacency(g) -> dict:
    """Neighbour lists from a networkx graph, a CellComplex or a mapping."""
    if hasattr(g, "adj") and hasattr(g, "nodes"):
        return {v: sorted(g.adj[v]) for v in sorted(g.nodes)}
    nb = getattr(g, "neighbors", g)
    return {v: sorted(nb[v]) for v in sorted(nb)}


@dataclass
class ModResult:
    mod_value: float
    vel_value: float
    metric: dict
    active_paths: list
    gap: float
    rounds: int = 0
    method: str = "cutting_plane"


# -- least-distance master problem ---------------------------------------------


def least_norm_cover(rows, n: int):
    """min Σ m² subject to Σ_{i∈row} m_i >= 1 for every row.

    The projection of 0 onto a polyhedron, solved exactly as a least
    distance problem through one NNLS (Lawson-Hanson): with E = [Gᵀ; 1ᵀ]
    and f = e_{n+1}, the NNLS residual r gives m = -r[:n]/r[n].
    Returns (m, λ) with λ the multipliers of the rows.
    """
    k = len(rows)
    E = np.zeros((n + 1, k))
    for j, row in enumerate(rows):
        E[list(row), j] = 1.0
    E[n, :] = 1.0
    f = np.zeros(n + 1)
    f[n] = 1.0
    lam, _ = nnls(E, f, maxiter=50 * (k + n + 10))
    r = E @ lam - f
    m = -r[:n] / r[n]
    return np.maximum(m, 0.0), lam / -r[n]


def _shortest(adj, m, sources, targets):
    """Vertex-weighted shortest paths from the source set to each target.

    Ties are broken by hop count so zero metrics still yield short paths.
    Returns {target: (length, path)} for reachable targets.
    """
    dist = {}
    prev = {}
    heap = []
    for s in sources:
        d = (m[s], 1)
        if d < dist.get(s, (math.inf, 0)):
            dist[s] = d
            prev[s] = None
            heapq.heappush(heap, (d, s))
    tset = set(targets)
    done = set()
    while heap:
        d, v = heapq.heappop(heap)
        if v in done:
            continue
        done.add(v)
        if v in tset:
            continue  # paths end at the first target reached
        for w in adj[v]:
            nd = (d[0] + m[w], d[1] + 1)
            if nd < dist.get(w, (math.inf, 0)):
                dist[w] = nd
                prev[w] = v
                heapq.heappush(heap, (nd, w))
    out = {}
    for t in targets:
        if t in dist:
            path = [t]
            while prev[path[-1]] is not None:
                path.append(prev[path[-1]])
            out[t] = (dist[t][0], path[::-1])
    return out


def _check_sets(adj, V1, V2):
    V1, V2 = set(V1), set(V2)
    if not V1 or not V2:
        raise BadNesting("vertex sets must be nonempty")
    if V1 & V2:
        raise SetsIntersect(f"sets share vertices {sorted(V1 & V2)[:5]}")
    missing = (V1 | V2) - set(adj)
    if missing:
        raise KeyError(f"unknown vertices {sorted(missing)[:5]}")
    return V1, V2


def mod_vel(g, V1, V2, tol: float = 1e-9, max_rounds: int = 500, method: str = "auto") -> ModResult:
    """MOD and VEL of the family of paths joining V1 to V2.

    Parameters
    ----------
    g : graph (networkx, CellComplex or neighbour mapping)
    V1, V2 : disjoint nonempty vertex sets
    tol : separation gap at which the cutting-plane loop stops
    method : "cutting_plane", "potential" or "auto" (potential above 300 vertices)

    Returns
    -------
    ModResult.  Unreachable V2 gives MOD 0 and VEL inf.
    """
    adj = adjacency(g)
    V1, V2 = _check_sets(adj, V1, V2)
    if method == "auto":
        method = "potential" if len(adj) > 300 else "cutting_plane"
    if method == "potential":
        return mod_vel_potential(adj, V1, V2)
    verts = sorted(adj)
    pos = {v: i for i, v in enumerate(verts)}
    m = {v: 0.0 for v in verts}
    src, tgt = sorted(V1), sorted(V2)
    found = _shortest(adj, m, src, tgt)
    if not found:
        return ModResult(0.0, math.inf, m, [], 0.0, 0, method)
    paths, seen = [], set()
    gap = 1.0
    for rnd in range(1, max_rounds + 1):
        new = 0
        for t in tgt:
            if t in found and found[t][0] < 1 - tol:
                key = tuple(found[t][1])
                if key not in seen:
                    seen.add(key)
                    paths.append(key)
                    new += 1
        if new == 0:
            break
        x, lam = least_norm_cover([[pos[v] for v in p] for p in paths], len(verts))
        m = dict(zip(verts, map(float, x)))
        found = _shortest(adj, m, src, tgt)
        short = min(d for d, _ in found.values())
        gap = 1 - short
        log.debug("mod_vel round %d paths %d gap %.3e", rnd, len(paths), gap)
        if gap <= tol:
            break
    else:
        log.warning("mod_vel stopped after %d rounds, gap %.3e", max_rounds, gap)
    area = math.fsum(x * x for x in m.values())
    active = [list(p) for p in paths if abs(sum(m[v] for v in p) - 1) < 1e-9]
    return ModResult(area, 1 / area if area > 0 else math.inf, m, active, max(gap, 0.0), rnd, method)


def mod_vel_potential(g, V1, V2) -> ModResult:
    """Same optimum through distance labels φ, solved as one sparse QP.

    min Σ m² s.t. φ_s <= m_s (s∈V1), φ_w <= φ_v + m_w (each direction of
    each edge), φ_t >= 1 (t∈V2), m >= 0.  Any feasible φ is a lower bound
    for the m-distance from V1, so the constraints say exactly that m is
    admissible.  Intended for graphs too large for cutting planes.
    """
    import cvxpy as cp

    adj = adjacency(g)
    V1, V2 = _check_sets(adj, V1, V2)
    verts = sorted(adj)
    pos = {v: i for i, v in enumerate(verts)}
    n = len(verts)
    rows, cols, vals = [], [], []
    k = 0
    for v in verts:
        for w in adj[v]:
            # φ_w - φ_v - m_w <= 0
            rows += [k, k, k]
            cols += [pos[w], pos[v], n + pos[w]]
            vals += [1.0, -1.0, -1.0]
            k += 1
    for s in sorted(V1):
        rows += [k, k]
        cols += [pos[s], n + pos[s]]
        vals += [1.0, -1.0]
        k += 1
    A = sp.csr_matrix((vals, (rows, cols)), shape=(k, 2 * n))
    x = cp.Variable(2 * n)
    tg = [pos[t] for t in sorted(V2)]
    cons = [A @ x <= 0, x[n:] >= 0, x[tg] >= 1]
    prob = cp.Problem(cp.Minimize(cp.sum_squares(x[n:])), cons)
    try:
        prob.solve(solver=cp.CLARABEL, tol_gap_abs=1e-10, tol_gap_rel=1e-10, tol_feas=1e-10)
    except cp.SolverError:
        log.info("tight QP tolerances failed; retrying with solver defaults")
        prob.solve(solver=cp.CLARABEL)
    if prob.status not in ("optimal", "optimal_inaccurate"):
        if prob.status == "infeasible":
            return ModResult(0.0, math.inf, {v: 0.0 for v in verts}, [], 0.0, 0, "potential")
        raise RuntimeError(f"QP solver status {prob.status}")
    mv = np.maximum(np.asarray(x.value[n:]), 0.0)
    m = dict(zip(verts, map(float, mv)))
    found = _shortest(adj, m, sorted(V1), sorted(V2))
    if not found:
        return ModResult(0.0, math.inf, m, [], 0.0, 0, "potential")
    short = min(d for d, _ in found.values())
    # scale to exact admissibility; the area is then an upper bound within solver tolerance
    if short > 0:
        m = {v: x / short for v, x in m.items()}
    area = math.fsum(x * x for x in m.values())
    return ModResult(area, 1 / area, m, [], max(1 - short, 0.0), 1, "potential")


# -- brute force -----------------------------------------------------------------


def simple_paths(adj, V1, V2, limit: int = 200_000):
    """All simple V1-V2 paths whose inner vertices avoid V1 and V2."""
    V1, V2 = set(V1), set(V2)
    out = []
    for s in sorted(V1):
        stack = [(s, [s])]
        while stack:
            v, path = stack.pop()
            for w in adj[v]:
                if w in path or w in V1:
                    continue
                if w in V2:
                    out.append(path + [w])
                    if len(out) > limit:
                        raise ValueError("too many paths to enumerate")
                    continue
                stack.append((w, path + [w]))
    return out


def family_mod(family, vertices) -> tuple[float, dict]:
    """Exact MOD of an explicit family of vertex sets."""
    verts = sorted(vertices)
    pos = {v: i for i, v in enumerate(verts)}
    if not family:
        return 0.0, {v: 0.0 for v in verts}
    x, _ = least_norm_cover([[pos[v] for v in set(p)] for p in family], len(verts))
    return float(x @ x), dict(zip(verts, map(float, x)))


def mod_vel_bruteforce(g, V1, V2) -> ModResult:
    adj = adjacency(g)
    V1, V2 = _check_sets(adj, V1, V2)
    paths = simple_paths(adj, V1, V2)
    if not paths:
        return ModResult(0.0, math.inf, {v: 0.0 for v in adj}, [], 0.0, 0, "bruteforce")
    mod, m = family_mod(paths, adj)
    return ModResult(mod, 1 / mod, m, paths, 0.0, 1, "bruteforce")


def minimal_separators(g, V1, V2, max_vertices: int = 16):
    """Minimal vertex sets meeting every V1-V2 path (brute force)."""
    adj = adjacency(g)
    V1, V2 = _check_sets(adj, V1, V2)
    verts = sorted(adj)
    if len(verts) > max_vertices:
        raise ValueError(f"{len(verts)} vertices is too many to enumerate separators")
    paths = [frozenset(p) for p in simple_paths(adj, V1, V2)]
    pos = {v: i for i, v in enumerate(verts)}
    pmask = [sum(1 << pos[v] for v in p) for p in paths]
    hitting = []
    for size in range(1, len(verts) + 1):
        for combo in itertools.combinations(range(len(verts)), size):
            mask = sum(1 << i for i in combo)
            if any(h & mask == h for h in hitting):
                continue
            if all(pm & mask for pm in pmask):
                hitting.append(mask)
    return [[verts[i] for i in range(len(verts)) if h >> i & 1] for h in hitting]


# -- laws ----------------------------------------------------------------------------


def _separates(adj, S, A, B):
    """True when every A-B path meets S."""
    S = set(S)
    seen = set(a for a in A if a not in S)
    stack = list(seen)
    B = set(B)
    while stack:
        v = stack.pop()
        if v in B:
            return False
        for w in adj[v]:
            if w not in S and w not in seen:
                seen.add(w)
                stack.append(w)
    return True


@dataclass
class LawsReport:
    serial_lhs: float
    serial_terms: list
    serial_holds: bool
    duality_product: float | None = None
    duality_error: float | None = None
    notes: list = field(default_factory=list)


def vel_laws_audit(g, sets, duality: bool = True, tol: float = 1e-9) -> LawsReport:
    """Serial law VEL(V1, V2m) >= Σ VEL(V_{2k-1}, V_{2k}) and blocking duality.

    ``sets`` is V1, ..., V2m; each V_j must separate every earlier set
    from every later one.  Duality is checked as MOD(Γ)·MOD(Γ*) = 1,
    with Γ* the minimal vertex sets meeting every V1-V2m path; it is
    skipped on graphs too large to enumerate.
    """
    adj = adjacency(g)
    sets = [set(s) for s in sets]
    if len(sets) < 2 or len(sets) % 2:
        raise BadNesting("need an even, positive number of vertex sets")
    if any(not s for s in sets):
        raise BadNesting("vertex sets must be nonempty")
    for i, j in itertools.combinations(range(len(sets)), 2):
        if sets[i] & sets[j]:
            raise BadNesting(f"sets {i + 1} and {j + 1} intersect")
    for i1, i2, i3 in itertools.combinations(range(len(sets)), 3):
        if not _separates(adj, sets[i2], sets[i1], sets[i3]):
            raise BadNesting(f"set {i2 + 1} does not separate set {i1 + 1} from set {i3 + 1}")
    lhs = mod_vel(adj, sets[0], sets[-1], tol=tol).vel_value
    terms = [mod_vel(adj, sets[k], sets[k + 1], tol=tol).vel_value for k in range(0, len(sets), 2)]
    rep = LawsReport(lhs, terms, lhs >= sum(terms) * (1 - 1e-9))
    if duality:
        try:
            seps = minimal_separators(adj, sets[0], sets[-1])
        except ValueError as exc:
            rep.notes.append(str(exc))
        else:
            mod = mod_vel_bruteforce(adj, sets[0], sets[-1]).mod_value
            mod_star, _ = family_mod(seps, adj)
            rep.duality_product = mod * mod_star
            rep.duality_error = abs(rep.duality_product - 1)
    return rep


# -- exhaustion and type -----------------------------------------------------------


@dataclass
class VelSeries:
    levels: list
    values: list
    fit: tuple | None
    diagnostic: str


def log_fit(levels, values):
    """Least squares a + c·log(level); returns (a, c, r²)."""
    x = np.log(np.asarray(levels, dtype=float))
    y = np.asarray(values, dtype=float)
    X = np.stack([np.ones_like(x), x], axis=1)
    coef, *_ = np.linalg.lstsq(X, y, rcond=None)
    res = y - X @ coef
    ss = float(((y - y.mean()) ** 2).sum())
    r2 = 1 - float(res @ res) / ss if ss > 0 else 1.0
    return float(coef[0]), float(coef[1]), r2


def _vel_trend(levels, values):
    if len(values) < 3:
        return None, "none"
    fit = log_fit(levels, values)
    inc = np.diff(values)
    ratios = inc[1:] / np.where(inc[:-1] > 0, inc[:-1], np.nan)
    last = float(ratios[-1]) if len(ratios) else float("nan")
    if fit[1] > 0 and last > 0.6 and fit[2] > 0.95:
        return fit, "divergent"
    if last < 0.6 or inc[-1] < 1e-3 * values[-1]:
        return fit, "bounded"
    return fit, "unclear"


def vel_to_infinity(gen, W, levels, root=None, method: str = "auto") -> VelSeries:
    """VEL(W, ∂D_n) along the exhaustion, nondecreasing in n."""
    from .complex import exhaust

    W = set(W)
    levels = list(levels)
    vals, used = [], []
    for n in levels:
        c = exhaust(gen, root, n).complex
        if not W <= set(c.vertices) or W & set(c.boundary_vertices):
            continue
        r = mod_vel(c, W, c.boundary_vertices, method=method)
        used.append(n)
        vals.append(r.vel_value)
    fit, diag = _vel_trend(used, vals)
    return VelSeries(used, vals, fit, diag)


def escape_probability(c, root) -> float:
    """Exact chance that simple random walk from root hits the boundary before returning."""
    adj = adjacency(c)
    bd = set(c.boundary_vertices)
    free = [v for v in adj if v not in bd and v != root]
    idx = {v: i for i, v in enumerate(free)}
    rows, cols, vals = [], [], []
    b = np.zeros(len(free))
    for v in free:
        i = idx[v]
        rows.append(i)
        cols.append(i)
        vals.append(float(len(adj[v])))
        for w in adj[v]:
            if w in idx:
                rows.append(i)
                cols.append(idx[w])
                vals.append(-1.0)
            elif w in bd:
                b[i] += 1.0
    h = {}
    if free:
        L = sp.csr_matrix((vals, (rows, cols)), shape=(len(free), len(free)))
        x = spla.spsolve(L.tocsc(), b)
        h = dict(zip(free, np.atleast_1d(x)))
    tot = sum(1.0 if w in bd else (0.0 if w == root else h[w]) for w in adj[root])
    return tot / len(adj[root])


def random_walk_escape(c, root, walks: int = 10_000, seed: int = 0, max_steps: int = 1_000_000):
    """Monte Carlo escape frequency: fraction of walks reaching the boundary before returning.

    Returns (frequency, standard error).  Walks still running after
    ``max_steps`` count as returned.
    """
    adj = adjacency(c)
    verts = sorted(adj)
    pos = {v: i for i, v in enumerate(verts)}
    indptr = np.zeros(len(verts) + 1, dtype=np.int64)
    for i, v in enumerate(verts):
        indptr[i + 1] = indptr[i] + len(adj[v])
    nbr = np.array([pos[w] for v in verts for w in adj[v]], dtype=np.int64)
    deg = np.diff(indptr)
    is_bd = np.zeros(len(verts), dtype=bool)
    is_bd[[pos[v] for v in c.boundary_vertices]] = True
    r = pos[root]
    rng = np.random.default_rng(seed)
    at = np.full(walks, r, dtype=np.int64)
    # first step
    at = nbr[indptr[at] + rng.integers(0, deg[at])]
    escaped = np.zeros(walks, dtype=bool)
    alive = np.ones(walks, dtype=bool)
    steps = 1
    while True:
        escaped |= alive & is_bd[at]
        alive &= ~is_bd[at] & (at != r)
        if not alive.any() or steps >= max_steps:
            break
        idx = np.nonzero(alive)[0]
        cur = at[idx]
        at[idx] = nbr[indptr[cur] + (rng.random(len(idx)) * deg[cur]).astype(np.int64)]
        steps += 1
    p = float(escaped.mean())
    return p, math.sqrt(max(p * (1 - p), 1e-300) / walks)


@dataclass
class TypeEvidence:
    verdict: str
    levels: list
    vel: list
    vel_fit: tuple | None
    vel_signal: str
    escape_mc: list
    escape_se: list
    escape_exact: list
    escape_signal: str
    seed: int
    mc_consistent: bool
    note: str = "evidence from finite truncations; no claim about the infinite complex"


def _escape_trend(p):
    if len(p) < 3:
        return "none"
    rel = [(p[k - 1] - p[k]) / p[k - 1] for k in range(1, len(p)) if p[k - 1] > 0]
    if p[-1] > 0.05 and abs(rel[-1]) < 0.02:
        return "plateau"
    if all(x > 0 for x in rel) and p[-1] < 0.9 * p[0]:
        return "decaying"
    return "unclear"


def type_detect(
    gen,
    root=None,
    levels=range(2, 9),
    walks: int = 10_000,
    seed: int = 0,
    budget: int = 20_000,
    method: str = "auto",
) -> TypeEvidence:
    """Parabolic / hyperbolic / inconclusive evidence from VEL growth and escape frequency.

    Levels whose complex exceeds ``budget`` vertices are skipped; fewer
    than three usable levels gives "inconclusive".
    """
    from .complex import exhaust

    rt = root if root is not None else getattr(gen, "root", 0)
    used, vel, pm, se, pe = [], [], [], [], []
    for n in levels:
        c = exhaust(gen, root, n).complex
        if len(c.vertices) > budget:
            break
        if rt not in c.interior_vertices:
            continue
        used.append(n)
        vel.append(mod_vel(c, {rt}, c.boundary_vertices, method=method).vel_value)
        f, s = random_walk_escape(c, rt, walks, seed + n)
        pm.append(f)
        se.append(s)
        pe.append(escape_probability(c, rt))
    fit, vsig = _vel_trend(used, vel)
    esig = _escape_trend(pe)
    if vsig == "divergent" and esig == "decaying":
        verdict = "parabolic"
    elif vsig == "bounded" and esig == "plateau":
        verdict = "hyperbolic"
    else:
        verdict = "inconclusive"
    # Monte Carlo frequencies should sit within five standard errors of the exact values
    mc_ok = all(abs(f - p) <= 5 * s + 1e-12 for f, p, s in zip(pm, pe, se))
    return TypeEvidence(verdict, used, vel, fit, vsig, pm, se, pe, esig, seed, mc_ok)


# -- subdivision -------------------------------------------------------------------


@dataclass
class SubdivisionComparison:
    vel_complex: float
    vel_triangulation: float
    ratio: float
    degree_bound: int
    within_bounds: bool


def subdivision_compare(c, W1, W2, N: int | None = None, method: str = "cutting_plane") -> SubdivisionComparison:
    """VEL between W1 and W2 on the 1-skeleton and on the face subdivision.

    Checks VEL_T <= VEL_D <= (N² + 1)·VEL_T with N bounding vertex and
    face degrees.
    """
    from .complex import subdivide

    W1, W2 = set(W1), set(W2)
    if W1 & W2:
        raise SetsIntersect("W1 and W2 intersect")
    t = subdivide(c).triangulation
    if N is None:
        N = max(c.max_degree(), max(len(f) for f in c.faces))
    solve = mod_vel_bruteforce if method == "bruteforce" else mod_vel
    vd = solve(c, W1, W2).vel_value
    vt = solve(t, W1, W2).vel_value
    ratio = vd / vt
    ok = vt <= vd * (1 + 1e-9) and vd <= (N * N + 1) * vt * (1 + 1e-9)
    return SubdivisionComparison(vd, vt, ratio, N, ok)


# -- geometric lower bound -------------------------------------------------------


@dataclass
class EstimateAudit:
    vel_value: float
    bound: float
    holds: bool
    r1: float
    r2: float
    epsilon: float
    ring_upper: float


def vel_estimate_audit(p, V1, ring_upper: float, r2: float | None = None, epsilon=None) -> EstimateAudit:
    """Compare VEL(V1, V2) with the bound sin⁴ε(r₂-r₁)²/(2(sin ε + 4C + 4)²r₂²).

    V1's disks must lie in B(0, r1); W is the set of vertices with center
    in B(0, r2), r2 >= 2 r1, and V2 the vertices adjacent to W outside it.
    ``ring_upper`` is the largest neighbour radius ratio C (for instance
    RingStats.upper_ratio).  The bound is reported, not asserted.
    """
    c = p.complex
    V1 = set(V1)
    cen, rad = p.euclid_centers, p.euclid_radii
    if epsilon is None:
        epsilon = math.pi - p.angles.sup
    r1 = max(abs(cen[v]) + rad[v] for v in V1)
    r2 = 2 * r1 if r2 is None else r2
    if r2 < 2 * r1:
        raise BadNesting("need r2 >= 2 r1")
    W = {v for v in c.vertices if abs(cen[v]) < r2}
    V2 = c.outer_boundary(W)
    if not V2:
        raise BadNesting("the circle of radius r2 does not meet the carrier")
    vel = mod_vel(c, V1, V2).vel_value
    se = math.sin(epsilon)
    bound = se**4 * (r2 - r1) ** 2 / (2 * (se + 4 * ring_upper + 4) ** 2 * r2**2)
    return EstimateAudit(vel, bound, vel >= bound, r1, r2, epsilon, ring_upper)
