"""Newton's method on conformal factors.

Unknowns are the factors u of interior vertices; boundary factors are
fixed.  The curvature map K(u) has a symmetric Jacobian (each entry is a
kite-angle derivative), positive definite on the interior block, so each
Newton step is a symmetric positive definite solve.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .angles import AngleData
from .conditions import curvature_target_feasible, feasibility_min_cut
from .errors import (
    DomainError,
    InfeasibleTarget,
    NoConvergence,
    PreconditionFailed,
    SingularJacobian,
)
from .kernel import (
    CIRCLE,
    EUCLIDEAN,
    HOROCYCLE,
    HYPERBOLIC,
    background_name,
    conformal_factor,
    edge_terms,
    hyp_radius,
    kind_of,
    radius_from_factor,
)

log = logging.getLogger(__name__)

TWO_PI = 2 * math.pi
DENSE_LIMIT = 2500
CG_LIMIT = 100_000


@dataclass
class ConformalState:
    background: str
    u: dict
    kinds: dict = field(default_factory=dict)

    def __post_init__(self):
        self.background = background_name(self.background)
        if not self.kinds:
            self.kinds = {v: kind_of(self.background, x) for v, x in self.u.items()}

    def radius(self, v):
        """Radius of circle v (None for a horocycle)."""
        return radius_from_factor(self.background, self.u[v]).radius

    def radii(self) -> dict:
        return {v: self.radius(v) for v in self.u}


@dataclass
class SolveReport:
    iterations: int
    residual: float
    history: list
    converged: bool
    min_pivot: float | None = None
    linear_solver: str = ""

    def as_dict(self):
        return {
            "iterations": self.iterations,
            "residual": self.residual,
            "history": list(self.history),
            "converged": self.converged,
            "min_pivot": self.min_pivot,
            "linear_solver": self.linear_solver,
        }


class CurvatureSystem:
    """Vectorized K(u) and Jacobian over the interior vertices of a complex."""

    def __init__(self, c, a: AngleData, background: str):
        self.c = c
        self.background = background_name(background)
        self.vertices = list(c.vertices)
        self.pos = {v: i for i, v in enumerate(self.vertices)}
        self.interior = list(c.interior_vertices)
        self.boundary = list(c.boundary_vertices)
        self.ipos = {v: i for i, v in enumerate(self.interior)}
        self.bpos = {v: i for i, v in enumerate(self.boundary)}
        src, dst, th = [], [], []
        for v in self.interior:
            for w in c.neighbors[v]:
                src.append(self.pos[v])
                dst.append(self.pos[w])
                th.append(a[(v, w)])
        self.src = np.array(src, dtype=np.int64)
        self.dst = np.array(dst, dtype=np.int64)
        self.theta = np.array(th)
        gi = np.full(len(self.vertices), -1, dtype=np.int64)
        gb = np.full(len(self.vertices), -1, dtype=np.int64)
        for v, i in self.ipos.items():
            gi[self.pos[v]] = i
        for v, i in self.bpos.items():
            gb[self.pos[v]] = i
        self.isrc = gi[self.src]
        self.idst = gi[self.dst]
        self.bdst = gb[self.dst]
        self.int_mask = self.idst >= 0

    @property
    def n(self):
        return len(self.interior)

    def full(self, u_int, u_bd):
        u = np.empty(len(self.vertices))
        u[[self.pos[v] for v in self.interior]] = u_int
        u[[self.pos[v] for v in self.boundary]] = u_bd
        return u

    def terms(self, u):
        return edge_terms(self.background, u[self.src], u[self.dst], self.theta)

    def curvature(self, u):
        al, _, _ = self.terms(u)
        return TWO_PI - np.bincount(self.isrc, weights=al, minlength=self.n)

    def jacobian(self, u):
        """(J_II sparse, J_IB sparse) with J = ∂K/∂u."""
        _, dv, dw = self.terms(u)
        return self._assemble(dv, dw)

    def _assemble(self, dv, dw):
        n = self.n
        diag = -np.bincount(self.isrc, weights=dv, minlength=n)
        m = self.int_mask
        rows = np.concatenate([np.arange(n), self.isrc[m]])
        cols = np.concatenate([np.arange(n), self.idst[m]])
        vals = np.concatenate([diag, -dw[m]])
        J_II = sp.csr_matrix((vals, (rows, cols)), shape=(n, n))
        b = ~m
        J_IB = sp.csr_matrix(
            (-dw[b], (self.isrc[b], self.bdst[b])), shape=(n, len(self.boundary))
        )
        return J_II, J_IB

    def mean_jacobian(self, u0, u1, order=8):
        """∫₀¹ J(u0 + t(u1-u0)) dt by Gauss-Legendre quadrature."""
        x, w = np.polynomial.legendre.leggauss(order)
        t = (x + 1) / 2
        w = w / 2
        dv_acc = np.zeros(len(self.src))
        dw_acc = np.zeros(len(self.src))
        for tk, wk in zip(t, w):
            _, dv, dw = self.terms(u0 + tk * (u1 - u0))
            dv_acc += wk * dv
            dw_acc += wk * dw
        return self._assemble(dv_acc, dw_acc)


class SpdFactor:
    """Factor of a symmetric positive definite matrix with a pivot certificate.

    Dense Cholesky for small systems.  Larger ones use SuperLU with a
    symmetric ordering and no row pivoting, which is an LDLᵀ factorization;
    positive definiteness is certified by the diagonal of U.  Above
    CG_LIMIT unknowns a Jacobi-preconditioned CG is used and no pivots
    are available.
    """

    def __init__(self, J):
        n = J.shape[0]
        self.n = n
        self.min_pivot = None
        if n <= DENSE_LIMIT:
            self.kind = "cholesky"
            try:
                self._cf = sla.cho_factor(J.toarray(), lower=True, check_finite=True)
            except (sla.LinAlgError, ValueError) as exc:
                raise SingularJacobian(f"Jacobian is not positive definite: {exc}") from None
            self.min_pivot = float(np.min(np.diag(self._cf[0])) ** 2)
        elif n <= CG_LIMIT:
            self.kind = "ldl"
            try:
                lu = spla.splu(
                    J.tocsc(),
                    permc_spec="MMD_AT_PLUS_A",
                    diag_pivot_thresh=0.0,
                    options={"SymmetricMode": True},
                )
            except RuntimeError as exc:
                raise SingularJacobian(str(exc)) from None
            if not np.array_equal(lu.perm_r, lu.perm_c):
                raise SingularJacobian("factorization needed off-diagonal pivots")
            piv = lu.U.diagonal()
            self.min_pivot = float(piv.min())
            if not self.min_pivot > 0:
                raise SingularJacobian("nonpositive pivot in LDL factorization")
            self._lu = lu
        else:
            self.kind = "cg"
            self._J = J.tocsr()
            d = J.diagonal()
            if np.any(d <= 0):
                raise SingularJacobian("nonpositive Jacobian diagonal")
            self._M = sp.diags(1.0 / d)

    def solve(self, b):
        if self.kind == "cholesky":
            return sla.cho_solve(self._cf, b)
        if self.kind == "ldl":
            return self._lu.solve(b)
        x, info = spla.cg(self._J, b, M=self._M, rtol=1e-14, maxiter=20 * self.n)
        if info != 0:
            raise NoConvergence("conjugate gradient did not converge")
        return x


def _check_target(c, a, k_target):
    if len(c.interior_vertices) <= 20:
        ok, witness = curvature_target_feasible(c, a, k_target)
    else:
        ok, witness, _ = feasibility_min_cut(c, a, k_target)
    if not ok:
        raise InfeasibleTarget(f"curvature target violates the subset inequality on {sorted(witness)}")


def _boundary_factors(c, background, boundary_r, boundary_u):
    if boundary_u is not None:
        return {v: float(boundary_u[v]) for v in c.boundary_vertices}
    if boundary_r is None:
        raise DomainError("boundary radii required")
    if isinstance(boundary_r, (int, float)):
        boundary_r = {v: float(boundary_r) for v in c.boundary_vertices}
    out = {}
    for v in c.boundary_vertices:
        r = boundary_r.get(v)
        if r is None:
            raise DomainError(f"no boundary radius for vertex {v}")
        out[v] = conformal_factor(CIRCLE, float(r), background)
    return out


def newton(sysm: CurvatureSystem, u_bd, k_hat, u0, tol, max_iter, min_steps=0):
    """Damped Newton on K_I(u) = k_hat.  Returns (u_int, report)."""
    hyp = sysm.background == HYPERBOLIC
    x = np.array(u0, dtype=float)

    def resid(x):
        return sysm.curvature(sysm.full(x, u_bd)) - k_hat

    F = resid(x)
    hist = [float(np.max(np.abs(F), initial=0.0))]
    factor = None
    it = 0
    while it < max_iter:
        if hist[-1] <= tol and it >= min_steps:
            break
        J, _ = sysm.jacobian(sysm.full(x, u_bd))
        factor = SpdFactor(J)
        step = -factor.solve(F)
        merit = float(F @ F)
        t = 1.0
        for _ in range(60):
            y = x + t * step
            if not hyp or np.all(y < 0):
                G = resid(y)
                if np.all(np.isfinite(G)) and float(G @ G) < merit * (1 - 1e-4 * t) or merit == 0:
                    break
            t *= 0.5
        else:
            if hist[-1] <= tol:
                break
            raise NoConvergence(f"line search failed at iteration {it}, residual {hist[-1]:.3e}")
        x, F = y, G
        it += 1
        hist.append(float(np.max(np.abs(F), initial=0.0)))
        log.debug("newton iter %d residual %.3e step %.3g", it, hist[-1], t)
    converged = hist[-1] <= tol
    if not converged:
        raise NoConvergence(f"no convergence in {max_iter} iterations, residual {hist[-1]:.3e}")
    J, _ = sysm.jacobian(sysm.full(x, u_bd))
    factor = SpdFactor(J) if sysm.n else None
    rep = SolveReport(
        it,
        hist[-1],
        hist,
        converged,
        None if factor is None else factor.min_pivot,
        "" if factor is None else factor.kind,
    )
    return x, rep


def solve_dirichlet(
    c,
    a: AngleData,
    boundary_r=None,
    k_target=None,
    background: str = EUCLIDEAN,
    tol: float = 1e-12,
    max_iter: int = 100,
    boundary_u=None,
    u0=None,
    check: bool = True,
    min_steps: int = 0,
):
    """Solve K_v(u) = k_target(v) on interior vertices with fixed boundary data.

    Parameters
    ----------
    c, a : complex and intersection angles.
    boundary_r : dict or float
        Radii of boundary circles (a constant applies to all).
    k_target : dict, optional
        Target curvature per interior vertex, default 0.
    background : "euclidean" or "hyperbolic"
    boundary_u : dict, optional
        Boundary factors given directly (overrides ``boundary_r``); in the
        hyperbolic background this allows horocycles (0) and hypercycles.
    u0 : dict, optional
        Warm start for interior factors.

    Returns
    -------
    (ConformalState, SolveReport)
    """
    background = background_name(background)
    k_target = dict(k_target or {})
    a.check_defined_on(c)
    if check and c.interior_vertices:
        _check_target(c, a, k_target)
    ub = _boundary_factors(c, background, boundary_r, boundary_u)
    sysm = CurvatureSystem(c, a, background)
    u_bd = np.array([ub[v] for v in sysm.boundary])
    if background == HYPERBOLIC and np.any(u_bd >= math.pi / 2):
        raise DomainError("hyperbolic boundary factors must be below pi/2")
    if sysm.n == 0:
        st = ConformalState(background, dict(ub))
        return st, SolveReport(0, 0.0, [0.0], True)
    k_hat = np.array([k_target.get(v, 0.0) for v in sysm.interior])
    if u0 is not None:
        x0 = np.array([u0[v] for v in sysm.interior], dtype=float)
    else:
        m = float(np.mean(u_bd))
        if background == HYPERBOLIC:
            m = min(m, -0.5)
        x0 = np.full(sysm.n, m)
    x, rep = newton(sysm, u_bd, k_hat, x0, tol, max_iter, min_steps)
    u = dict(ub)
    u.update(zip(sysm.interior, map(float, x)))
    return ConformalState(background, u), rep


def curvatures(c, a, state: ConformalState) -> dict:
    """K_v at every interior vertex of a state."""
    sysm = CurvatureSystem(c, a, state.background)
    u = np.array([state.u[v] for v in sysm.vertices])
    return dict(zip(sysm.interior, map(float, sysm.curvature(u))))


# -- horocycle limit ---------------------------------------------------------


@dataclass
class HorocycleResult:
    state: ConformalState
    stage_radii: list
    stage_u: list
    increments: list
    monotone: bool
    cauchy: list
    stages: int
    report: SolveReport


def stage_factor(r_hat: float, n: int) -> float:
    """Factor of a circle of radius 2^n r̂, ln tanh(2^(n-1) r̂)."""
    return conformal_factor(CIRCLE, math.ldexp(r_hat, n))


def certified_increment(sysm, u_prev, u_next, order=16):
    """Interior change from the mean-value system J̄_II Δu_I = -J̄_IB Δu_B.

    J̄_II is a nonsingular M-matrix and -J̄_IB ≥ 0, so Δu_I > 0 follows
    structurally whenever Δu_B ≥ 0 is nonzero; solving the system instead
    of subtracting avoids cancellation once the change drops below the
    precision of u itself.
    """
    J_II, J_IB = sysm.mean_jacobian(u_prev, u_next, order)
    bidx = [sysm.pos[v] for v in sysm.boundary]
    du_b = u_next[bidx] - u_prev[bidx]
    rhs = -(J_IB @ du_b)
    return SpdFactor(J_II).solve(rhs)


def horocycle_limit(
    c,
    a: AngleData,
    boundary_r0=1.0,
    n_max: int = 60,
    tol: float = 1e-8,
    solve_tol: float = 1e-12,
    check: bool = True,
):
    """Double the boundary radii until interior factors settle, then put horocycles on the boundary.

    Stage n solves with boundary radii 2^n r̂.  Each stage records the
    certified interior increment (positive means every radius grew) and
    the direct difference of solutions.  Stops when the increment's sup
    norm is below ``tol`` and performs a final solve with boundary factor 0.
    """
    if check:
        from .conditions import check_c1, min_nonfacial_cycle

        if not check_c1(c, a).passed:
            raise PreconditionFailed("angle data violates the face condition")
        if len(c.vertices) <= 400:
            cyc = min_nonfacial_cycle(c, a)
            if cyc is not None and not cyc[0] > TWO_PI:
                raise PreconditionFailed(f"cycle {cyc[1]} has exterior sum {cyc[0]:.6g} <= 2pi")
        else:
            ok, witness, _ = feasibility_min_cut(c, a)
            if not ok:
                raise PreconditionFailed(f"subset {sorted(witness)[:10]} violates the feasibility inequality")
    if isinstance(boundary_r0, (int, float)):
        boundary_r0 = {v: float(boundary_r0) for v in c.boundary_vertices}
    sysm = CurvatureSystem(c, a, HYPERBOLIC)
    iidx = [sysm.pos[v] for v in sysm.interior]
    radii, us, incs, cauchy = [], [], [], []
    monotone = True
    state = None
    prev = None
    for n in range(n_max + 1):
        ub = {v: stage_factor(boundary_r0[v], n) for v in sysm.boundary}
        if max(ub.values()) >= 0:
            raise NoConvergence("boundary factors reached 0 before interior factors settled")
        state, rep = solve_dirichlet(
            c, a, boundary_u=ub, background=HYPERBOLIC, tol=solve_tol,
            u0=None if state is None else state.u, check=False, min_steps=1 if state else 0,
        )
        u = np.array([state.u[v] for v in sysm.vertices])
        us.append(dict(state.u))
        r = {v: math.ldexp(boundary_r0[v], n) for v in sysm.boundary}
        r.update({v: float(hyp_radius(state.u[v])) for v in sysm.interior})
        radii.append(r)
        if prev is not None:
            inc = certified_increment(sysm, prev, u) if sysm.n else np.zeros(0)
            direct = u[iidx] - prev[iidx]
            if np.any(inc <= 0) or np.any(direct < -1e-14 * (1 + np.abs(u[iidx]))):
                monotone = False
            incs.append(dict(zip(sysm.interior, map(float, inc))))
            cauchy.append(float(np.max(np.abs(inc), initial=0.0)))
            log.debug("horocycle stage %d increment %.3e", n, cauchy[-1])
            if cauchy[-1] < tol:
                break
        prev = u
    else:
        raise NoConvergence(f"interior factors still moving after {n_max} stages")
    ub = {v: 0.0 for v in sysm.boundary}
    final, rep = solve_dirichlet(
        c, a, boundary_u=ub, background=HYPERBOLIC, tol=solve_tol, u0=state.u, check=False, min_steps=1
    )
    final.kinds.update({v: HOROCYCLE for v in sysm.boundary})
    return HorocycleResult(final, radii, us, incs, monotone, cauchy, n, rep)


# -- exhaustion driver -------------------------------------------------------


@dataclass
class ExhaustionRun:
    levels: list
    root: int
    root_radius: list
    states: list
    window: list
    window_ratios: list
    drift: list
    diagnostic: str
    evidence: dict


def _diagnose(levels, rr):
    """Case 1 (hyperbolic), Case 2 (parabolic) or inconclusive from root radii."""
    if len(rr) < 3:
        return "inconclusive", {}
    drops = [rr[k - 1] - rr[k] for k in range(1, len(rr))]
    q = [drops[k] / drops[k - 1] for k in range(1, len(drops)) if drops[k - 1] > 0]
    # radius times level is roughly constant when r -> 0 like 1/level
    scaled = [r * lv for r, lv in zip(rr, levels)]
    ev = {"drops": drops, "drop_ratios": q, "radius_times_level": scaled}
    if not q:
        return "inconclusive", ev
    last = q[-1]
    if last < 0.6 and drops[-1] < 0.05 * rr[-1]:
        return "hyperbolic", ev
    # r ~ 1/level: drops shrink polynomially and r·level levels off
    if last > 0.65 and scaled[-1] < 1.1 * scaled[-2]:
        return "parabolic", ev
    return "inconclusive", ev


def exhaustion_run(gen, root=None, levels=(1, 2, 3), window: int = 1, tol: float = 1e-8):
    """Horocycle-limit patterns on successive exhaustion levels.

    The root radius in the disk is invariant under the disk isometry that
    centers the root circle, so no explicit normalization is needed to
    read it off.  Window ratios r_v / r_root for vertices within
    ``window`` edges of the root approximate the Euclidean shape when
    the root radius is small.
    """
    from .complex import exhaust

    levels = list(levels)
    rr, states, ratios = [], [], []
    win = None
    rt = root if root is not None else getattr(gen, "root", 0)
    for n in levels:
        lev = exhaust(gen, root, n)
        c, a = lev.complex, lev.angles
        if rt not in c.interior_vertices:
            states.append(None)
            rr.append(float("nan"))
            ratios.append({})
            continue
        res = horocycle_limit(c, a, 1.0, tol=tol, check=False)
        st = res.state
        states.append(st)
        r0 = float(hyp_radius(st.u[rt]))
        rr.append(r0)
        if win is None:
            d = c.graph_distances([rt])
            win = sorted(v for v, k in d.items() if 0 < k <= window)
        ratios.append({v: float(hyp_radius(st.u[v])) / r0 for v in win if v in c.interior_vertices})
    drift = []
    for k in range(1, len(ratios)):
        common = set(ratios[k]) & set(ratios[k - 1])
        drift.append(max((abs(ratios[k][v] - ratios[k - 1][v]) for v in common), default=float("nan")))
    ok = [(lv, r) for lv, r in zip(levels, rr) if math.isfinite(r)]
    diag, ev = _diagnose([x[0] for x in ok], [x[1] for x in ok])
    return ExhaustionRun(levels, rt, rr, states, win or [], ratios, drift, diag, ev)
