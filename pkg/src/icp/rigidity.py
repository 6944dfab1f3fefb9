"""Discrete harmonic functions, comparison weights and maximum-principle audits.

Two solutions u, u* of the same curvature problem differ by f = u* - u.
Integrating the kite-angle derivatives along the segment between them
turns the curvature difference into a weighted Laplacian of f, so in the
Euclidean background f is exactly ω-harmonic for the comparison weights.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .angles import edge_key
from .errors import NoBoundary, NoDeepInterior, PreconditionFailed
from .kernel import EUCLIDEAN, HYPERBOLIC, background_name, edge_terms

TWO_PI = 2 * math.pi


@dataclass
class WeightedGraph:
    """Symmetric positive edge weights ω on a vertex set.

    ``self_terms`` holds the zero-order coefficients that appear in the
    hyperbolic comparison (identically zero in the Euclidean case).
    """

    vertices: list
    weights: dict  # edge key -> ω > 0
    self_terms: dict = field(default_factory=dict)
    asymmetry: float = 0.0
    order: int = 8

    def neighbors(self):
        nb = {v: [] for v in self.vertices}
        for (v, w), x in self.weights.items():
            nb[v].append((w, x))
            nb[w].append((v, x))
        return nb

    def laplacian(self, f: dict, at=None) -> dict:
        """Δ_ω f_v = Σ_w ω_vw (f_w - f_v) (+ self term · f_v)."""
        nb = self.neighbors()
        out = {}
        for v in at if at is not None else self.vertices:
            s = [x * (f[w] - f[v]) for w, x in nb[v]]
            s.append(self.self_terms.get(v, 0.0) * f[v])
            out[v] = math.fsum(s)
        return out

    def degree_sums(self) -> dict:
        d = {v: 0.0 for v in self.vertices}
        for (v, w), x in self.weights.items():
            d[v] += x
            d[w] += x
        return d


def _u_of(x):
    return x.u if hasattr(x, "u") else dict(x)


def comparison_weights(c, a, u, u_star, quadrature_order: int = 8, background: str = EUCLIDEAN):
    """ω_vw = ∫₀¹ ∂α_v^w/∂u_w along the segment from u to u*.

    Gauss-Legendre with the given order, doubled when u and u* differ by
    more than 1 somewhere.  Edges whose endpoints are both ordinary circles
    get the average of the two directed integrals (equal in exact
    arithmetic); an edge from a circle to a horocycle or hypercycle uses the
    circle's direction only.
    """
    if hasattr(u, "background"):
        background = u.background
    background = background_name(background)
    u, us = _u_of(u), _u_of(u_star)
    if set(u) != set(us):
        raise PreconditionFailed("states are defined on different vertex sets")
    order = quadrature_order
    if max(abs(us[v] - u[v]) for v in u) > 1:
        order *= 2
    x, wq = np.polynomial.legendre.leggauss(order)
    t = (x + 1) / 2
    wq = wq / 2

    def is_circle(v):
        return background == EUCLIDEAN or (u[v] < 0 and us[v] < 0)

    src, dst, th = [], [], []
    for v, w in c.edges:
        for p, q in ((v, w), (w, v)):
            if is_circle(p):
                src.append(p)
                dst.append(q)
                th.append(a[(p, q)])
    uv0 = np.array([u[p] for p in src])
    uv1 = np.array([us[p] for p in src])
    uw0 = np.array([u[q] for q in dst])
    uw1 = np.array([us[q] for q in dst])
    th = np.array(th)
    acc_w = np.zeros(len(src))
    acc_s = np.zeros(len(src))
    for tk, wk in zip(t, wq):
        _, dv, dw = edge_terms(background, uv0 + tk * (uv1 - uv0), uw0 + tk * (uw1 - uw0), th)
        acc_w += wk * dw
        acc_s += wk * (dv + dw)
    directed = {}
    self_terms = {v: 0.0 for v in c.vertices}
    for p, q, x, s in zip(src, dst, acc_w, acc_s):
        directed[(p, q)] = float(x)
        if background == HYPERBOLIC:
            self_terms[p] += float(s)
    weights = {}
    asym = 0.0
    for v, w in c.edges:
        vals = [directed[k] for k in ((v, w), (w, v)) if k in directed]
        if len(vals) == 2:
            asym = max(asym, abs(vals[0] - vals[1]))
        weights[edge_key(v, w)] = sum(vals) / len(vals)
    return WeightedGraph(list(c.vertices), weights, self_terms, asym, order)


def harmonic_solve(wg: WeightedGraph, boundary_values: dict) -> dict:
    """Solve Δ_ω f = 0 off the boundary with f fixed on it.

    Raises NoBoundary if the boundary is empty or some connected component
    never touches it.
    """
    if not boundary_values:
        raise NoBoundary("harmonic_solve needs boundary values")
    free = [v for v in wg.vertices if v not in boundary_values]
    if not free:
        return dict(boundary_values)
    idx = {v: i for i, v in enumerate(free)}
    rows, cols, vals = [], [], []
    rhs = np.zeros(len(free))
    diag = np.zeros(len(free))
    for (v, w), x in wg.weights.items():
        for p, q in ((v, w), (w, v)):
            if p in idx:
                i = idx[p]
                diag[i] += x
                if q in idx:
                    rows.append(i)
                    cols.append(idx[q])
                    vals.append(-x)
                else:
                    rhs[i] += x * boundary_values[q]
    for v, s in wg.self_terms.items():
        if v in idx:
            diag[idx[v]] -= s
    n = len(free)
    L = sp.csr_matrix((vals, (rows, cols)), shape=(n, n)) + sp.diags(diag)
    ncomp, labels = sp.csgraph.connected_components(
        sp.csr_matrix((np.ones(len(rows)), (rows, cols)), shape=(n, n)), directed=False
    )
    touched = np.zeros(ncomp, dtype=bool)
    touched[labels[rhs != 0]] = True
    # a component touches the boundary if some vertex has a boundary neighbour
    nb = wg.neighbors()
    for v in free:
        if any(q in boundary_values for q, _ in nb[v]):
            touched[labels[idx[v]]] = True
    if not touched.all():
        raise NoBoundary("a connected component has no boundary vertex")
    f = spla.spsolve(L.tocsc(), rhs)
    out = dict(boundary_values)
    out.update(zip(free, map(float, np.atleast_1d(f))))
    return out


# -- maximum principles --------------------------------------------------------


@dataclass
class MaxPrincipleVerdict:
    holds: bool
    background: str
    hypothesis_met: bool
    max_diff: float
    min_diff: float
    argmax: int
    argmin: int
    boundary_max: float
    boundary_min: float
    harmonic_residual: float | None = None
    detail: str = ""


def _check_pair(c, state, state_star):
    if state.background != state_star.background:
        raise PreconditionFailed("states use different backgrounds")
    if set(state.u) != set(c.vertices) or set(state_star.u) != set(c.vertices):
        raise PreconditionFailed("states do not cover the complex")


def max_principle_audit(c, a, state, state_star, tol: float = 1e-10) -> MaxPrincipleVerdict:
    """Check the maximum principle for f = u* - u.

    Euclidean: max and min of f are attained on the boundary (ties
    allowed).  Hyperbolic: if u* <= u and u* <= 0 on the boundary then
    u* <= u everywhere; when the hypothesis fails the verdict is vacuous
    (holds, hypothesis_met False).
    """
    _check_pair(c, state, state_star)
    f = {v: state_star.u[v] - state.u[v] for v in c.vertices}
    bd = list(c.boundary_vertices)
    vmax = max(f, key=lambda v: (f[v], -v))
    vmin = min(f, key=lambda v: (f[v], v))
    bmax = max(f[v] for v in bd)
    bmin = min(f[v] for v in bd)
    if state.background == EUCLIDEAN:
        wg = comparison_weights(c, a, state, state_star)
        res = wg.laplacian(f, at=c.interior_vertices)
        r = max((abs(x) for x in res.values()), default=0.0)
        ok = f[vmax] <= bmax + tol and f[vmin] >= bmin - tol
        return MaxPrincipleVerdict(ok, EUCLIDEAN, True, f[vmax], f[vmin], vmax, vmin, bmax, bmin, r)
    hyp = all(state_star.u[v] <= state.u[v] + tol and state_star.u[v] <= tol for v in bd)
    ok = (not hyp) or f[vmax] <= tol
    detail = "" if hyp else "boundary ordering not satisfied; nothing to check"
    return MaxPrincipleVerdict(ok, HYPERBOLIC, hyp, f[vmax], f[vmin], vmax, vmin, bmax, bmin, None, detail)


# -- ring constant -------------------------------------------------------------------


@dataclass
class RingStats:
    min_ratio: float  # Ĉ: min over deep vertices v and neighbours w of r(w)/r(v)
    witness: tuple
    depth: int
    deep_vertices: int
    epsilon: float

    @property
    def upper_ratio(self) -> float:
        """1/Ĉ, the largest neighbour radius ratio seen from a deep vertex."""
        return 1.0 / self.min_ratio

    @property
    def separation_radius(self) -> float:
        """7 + 6·(1/Ĉ): annulus factor guaranteeing no edge crosses it."""
        return 7.0 + 6.0 * self.upper_ratio


def ring_statistics(p, epsilon=None) -> RingStats:
    """Empirical ring constant over vertices at least ⌈6π/ε⌉ steps from the boundary.

    Radii are Euclidean: the plane pattern's radii, or the radii of the
    circles as drawn in the disk model for a hyperbolic pattern.
    """
    c = p.complex
    if epsilon is None or epsilon == "auto":
        epsilon = math.pi - p.angles.sup
    if not epsilon > 0:
        raise NoDeepInterior("epsilon must be positive")
    depth = math.ceil(6 * math.pi / epsilon - 1e-12)
    dist = c.graph_distances(c.boundary_vertices)
    deep = [v for v in c.vertices if dist.get(v, math.inf) > depth]
    if not deep:
        raise NoDeepInterior(f"no vertex is more than {depth} steps from the boundary")
    r = p.radii if p.background == EUCLIDEAN else p.euclid_radii
    best, wit = math.inf, None
    for v in deep:
        for w in c.neighbors[v]:
            q = r[w] / r[v]
            if q < best:
                best, wit = q, (v, w)
    return RingStats(float(best), wit, depth, len(deep), float(epsilon))


# -- rigidity diagnostic -------------------------------------------------------------


@dataclass
class RigidityReport:
    ratio_sup: float
    ratio_inf: float
    harmonic_residual: float
    residual_field: dict
    weight_sums_max: float
    derivative_constant: float
    weight_bound_holds: bool
    similar: bool
    argmax: int
    argmin: int


def derivative_constant(background, u, u_star, c, a, samples: int = 9) -> float:
    """Sampled C₀ = max (∂α_v^w/∂u_w)/α_v^w along the segment from u to u*."""
    best = 0.0
    src, dst, th = [], [], []
    for v, w in c.edges:
        for p, q in ((v, w), (w, v)):
            if background == EUCLIDEAN or (u[p] < 0 and u_star[p] < 0):
                src.append(p)
                dst.append(q)
                th.append(a[(p, q)])
    th = np.array(th)
    for t in np.linspace(0, 1, samples):
        uv = np.array([(1 - t) * u[p] + t * u_star[p] for p in src])
        uw = np.array([(1 - t) * u[q] + t * u_star[q] for q in dst])
        al, _, dw = edge_terms(background, uv, uw, th)
        best = max(best, float(np.max(dw / al)))
    return best


def rigidity_diagnostic(c, a, p, p_star, tol: float = 1e-8) -> RigidityReport:
    """Compare two solved patterns on the same complex.

    Accepts laid-out patterns or conformal states.  Reports the radius
    ratio range, the harmonicity residual of u* - u under the comparison
    weights, the weight-sum bound Σ_w ω_vw <= 2π C₀, and whether the ratio
    field is constant (similar patterns).
    """
    s = getattr(p, "state", p)
    s_star = getattr(p_star, "state", p_star)
    cs = getattr(p, "complex", c)
    cs_star = getattr(p_star, "complex", c)
    if not (c.same_combinatorics(cs) and c.same_combinatorics(cs_star)):
        raise PreconditionFailed("patterns live on different complexes")
    _check_pair(c, s, s_star)
    bg = s.background
    f = {v: s_star.u[v] - s.u[v] for v in c.vertices}
    if bg == EUCLIDEAN:
        ratio = {v: math.exp(f[v]) for v in c.vertices}
    else:
        ratio = {}
        for v in c.vertices:
            r, rs = s.radius(v), s_star.radius(v)
            ratio[v] = rs / r if r and rs else math.nan
    wg = comparison_weights(c, a, s, s_star)
    res = wg.laplacian(f, at=c.interior_vertices)
    rmax = max((abs(x) for x in res.values()), default=0.0)
    sums = wg.degree_sums()
    smax = max(sums[v] for v in c.interior_vertices) if c.interior_vertices else 0.0
    c0 = derivative_constant(bg, s.u, s_star.u, c, a)
    finite = [v for v in c.vertices if math.isfinite(ratio[v])]
    vmax = max(finite, key=lambda v: ratio[v])
    vmin = min(finite, key=lambda v: ratio[v])
    sup, inf = ratio[vmax], ratio[vmin]
    return RigidityReport(
        sup, inf, rmax, res, smax, c0, smax <= TWO_PI * c0 * (1 + 1e-12), sup - inf <= tol * max(1.0, abs(sup)),
        vmax, vmin,
    )
