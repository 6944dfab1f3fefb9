"""Developing a solved pattern into the plane or the Poincaré disk.

Every circle is stored as a Euclidean circle (center, radius) in the
plane of the picture; for the hyperbolic background that plane is the
Poincaré disk model.  Development is face by face: at a face point P the
circles of the face all pass through P and their centers are spaced
around P by the kite angles π - Θ.  The neighbouring face point is the
mirror image of P in the line of centers of the shared edge.
"""

from __future__ import annotations

import cmath
import math
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .angles import AngleData, edge_key
from .errors import HasChord, HolonomyTooLarge, NotEmbedded, PreconditionFailed
from .kernel import EUCLIDEAN, HOROCYCLE, HYPERBOLIC, edge_terms, g_factor

# -- Möbius helpers ----------------------------------------------------------


def disk_shift(a: complex):
    """Disk automorphism sending a to 0."""
    ac = a.conjugate()
    return lambda z: (z - a) / (1 - ac * z)


def circumcircle(p, q, r):
    """Center and radius of the circle through three points."""
    ax, ay = p.real, p.imag
    bx, by = q.real - ax, q.imag - ay
    cx, cy = r.real - ax, r.imag - ay
    d = 2 * (bx * cy - by * cx)
    b2, c2 = bx * bx + by * by, cx * cx + cy * cy
    ux = (cy * b2 - by * c2) / d
    uy = (bx * c2 - cx * b2) / d
    return complex(ax + ux, ay + uy), math.hypot(ux, uy)


def map_circle(f, center: complex, radius: float):
    pts = [center + radius * cmath.exp(1j * t) for t in (0.0, 2 * math.pi / 3, 4 * math.pi / 3)]
    return circumcircle(*(f(z) for z in pts))


def hyperbolic_center(center: complex, radius: float) -> complex:
    """Hyperbolic center of a Euclidean circle inside the unit disk.

    Returns the tangency point for a horocycle (circle touching the unit
    circle).
    """
    m = abs(center)
    if m < 1e-300:
        return 0j
    d = center / m
    x1, x2 = m - radius, m + radius
    if x2 >= 1 - 1e-15:
        return d
    s = math.atanh(x1) + math.atanh(x2)
    return d * math.tanh(s / 2)


def reflect(p: complex, a: complex, b: complex) -> complex:
    """Mirror image of p in the line through a and b."""
    d = b - a
    return a + d * ((p - a) / d).conjugate()


# -- development -------------------------------------------------------------


@dataclass
class LaidOutPattern:
    background: str
    complex: object
    angles: AngleData
    state: object
    euclid_centers: dict
    euclid_radii: dict
    centers: dict
    radii: dict
    dual_points: dict
    holonomy_residual: float
    kinds: dict = field(default_factory=dict)


def _disk_rho(u: float) -> float:
    # Euclidean radius of a circle through 0 in the disk model
    return 1.0 / (2.0 * float(g_factor(u)))


def _apply(m, z):
    return (m[0, 0] * z + m[0, 1]) / (m[1, 0] * z + m[1, 1])


def _map_circle_m(m, center, radius, hyp):
    if hyp:
        return map_circle(lambda z: _apply(m, z), center, radius)
    return m[0, 0] * center + m[0, 1], abs(m[0, 0]) * radius


def _normalize(m, hyp):
    if hyp:
        return m / np.sqrt(np.linalg.det(m))
    a = m[0, 0] / abs(m[0, 0])
    return np.array([[a, m[0, 1]], [0, 1]], dtype=complex)


def _local_frame(c, a, fi, rho):
    """Centers and radii of face fi's circles with the face point at 0."""
    f = c.faces[fi]
    n = len(f)
    out = {}
    b = 0.0
    for s in range(n):
        v = f[s]
        if s:
            b += math.pi - a[(f[s - 1], v)]
        r = rho(v)
        out[v] = (r * cmath.exp(1j * b), r)
    return out


def develop(c, a: AngleData, state, seed: int | None = None, holonomy_tol: float | None = 1e-6):
    """Lay out a solved state.

    Each face has a local frame with its face point at 0 and its circles
    spaced around it by the kite angles.  Frames of neighbouring faces are
    related by the motion matching the two circles of the shared edge
    (a rigid motion, or a disk automorphism in the hyperbolic case), and
    the global placement composes these motions along a breadth-first
    tree.  Every second derivation of a circle or face point is compared
    with the first; the largest disagreement is ``holonomy_residual`` and
    raises HolonomyTooLarge above ``holonomy_tol`` (None disables).

    Canonical pose: the seed vertex (smallest interior vertex by default)
    is centered at 0 and the next vertex of its first face lies on the
    positive x-axis.
    """
    bg = state.background
    u = state.u
    hyp = bg == HYPERBOLIC
    if seed is None:
        seed = c.interior_vertices[0] if c.interior_vertices else c.vertices[0]
    f0 = c.faces_around(seed)[0]
    face = c.faces[f0]
    k = face.index(seed)
    nxt = face[(k + 1) % len(face)]

    def rho(v):
        return _disk_rho(u[v]) if hyp else math.exp(u[v])

    local = [_local_frame(c, a, fi, rho) for fi in range(len(c.faces))]
    frames = {f0: np.eye(2, dtype=complex)}
    circles = {}
    hol = 0.0

    def scale(z, r=0.0):
        return 1.0 if hyp else max(1.0, abs(z), r)

    def relative(fi, g, x, y):
        """Motion taking g's local frame to fi's local frame."""
        Lf, Lg = local[fi], local[g]
        if hyp:
            q = reflect(0j, Lf[x][0], Lf[y][0])
            cz, _ = map_circle(disk_shift(q), *Lf[x])
            phi = cmath.phase(cz) - cmath.phase(Lg[x][0])
            e = cmath.exp(0.5j * phi)
            s = 1.0 / math.sqrt(1 - abs(q) ** 2)
            shift = np.array([[s, s * q], [s * q.conjugate(), s]], dtype=complex)
            return shift @ np.array([[e, 0], [0, 1 / e]], dtype=complex)
        d = (Lf[y][0] - Lf[x][0]) / (Lg[y][0] - Lg[x][0])
        rot = d / abs(d)
        t = 0.5 * ((Lf[x][0] - rot * Lg[x][0]) + (Lf[y][0] - rot * Lg[y][0]))
        return np.array([[rot, t], [0, 1]], dtype=complex)

    def place(fi):
        nonlocal hol
        m = frames[fi]
        for v, (z, r) in local[fi].items():
            cz, cr = _map_circle_m(m, z, r, hyp)
            if v in circles:
                oz, orr = circles[v]
                hol = max(hol, (abs(oz - cz) + abs(orr - cr)) / scale(oz, orr))
            else:
                circles[v] = (cz, cr)

    place(f0)
    queue = deque([f0])
    while queue:
        fi = queue.popleft()
        f = c.faces[fi]
        n = len(f)
        for s in range(n):
            x, y = f[s], f[(s + 1) % n]
            for g in c.edge_faces[edge_key(x, y)]:
                if g == fi:
                    continue
                m = _normalize(frames[fi] @ relative(fi, g, x, y), hyp)
                if g in frames:
                    P1, P2 = _apply(m, 0j), _apply(frames[g], 0j)
                    hol = max(hol, abs(P1 - P2) / scale(P1))
                    continue
                frames[g] = m
                place(g)
                queue.append(g)
    dual = {fi: _apply(m, 0j) for fi, m in frames.items()}

    # canonical pose
    if hyp:
        T = disk_shift(hyperbolic_center(*circles[seed]))
        cz, _ = map_circle(T, *circles[nxt])
        rot = cmath.exp(-1j * cmath.phase(cz))

        def M(z):
            return rot * T(z)

        circles = {v: map_circle(M, *cr_) for v, cr_ in circles.items()}
        dual = {fi: M(P) for fi, P in dual.items()}
    else:
        o = circles[seed][0]
        rot = cmath.exp(-1j * cmath.phase(circles[nxt][0] - o))
        circles = {v: ((z - o) * rot, r) for v, (z, r) in circles.items()}
        dual = {fi: (P - o) * rot for fi, P in dual.items()}

    if holonomy_tol is not None and hol > holonomy_tol:
        raise HolonomyTooLarge(f"holonomy residual {hol:.3e} exceeds {holonomy_tol:.1e}")

    ec = {v: circles[v][0] for v in c.vertices}
    er = {v: circles[v][1] for v in c.vertices}
    if hyp:
        centers = {v: hyperbolic_center(ec[v], er[v]) for v in c.vertices}
        radii = {v: state.radius(v) for v in c.vertices}
    else:
        centers, radii = dict(ec), dict(er)
    kinds = dict(getattr(state, "kinds", {}) or {})
    return LaidOutPattern(bg, c, a, state, ec, er, centers, radii, dual, hol, kinds)


# -- audits ------------------------------------------------------------------


def realized_angle(c1: complex, r1: float, c2: complex, r2: float) -> float:
    """Intersection angle Θ of two circles, l² = r1² + r2² + 2 r1 r2 cos Θ."""
    l = abs(c1 - c2)
    x = (l * l - r1 * r1 - r2 * r2) / (2 * r1 * r2)
    return math.acos(max(-1.0, min(1.0, x)))


def _circle_meet(c1, r1, c2, r2, near):
    d = c2 - c1
    l = abs(d)
    x = (l * l + r1 * r1 - r2 * r2) / (2 * l)
    h = math.sqrt(max(r1 * r1 - x * x, 0.0))
    base = c1 + d / l * x
    off = 1j * d / l * h
    p, q = base + off, base - off
    return p if abs(p - near) <= abs(q - near) else q


@dataclass
class PatternAudit:
    angle_error: float
    concurrency_spread: float
    worst_edge: tuple | None
    worst_face: int | None


def audit_pattern(p: LaidOutPattern) -> PatternAudit:
    """Realized angles against Θ and spread of the pairwise meeting points of each face."""
    c, a = p.complex, p.angles
    ec, er = p.euclid_centers, p.euclid_radii
    worst, we = 0.0, None
    for e in c.edges:
        v, w = e
        err = abs(realized_angle(ec[v], er[v], ec[w], er[w]) - a[e])
        if err > worst:
            worst, we = err, e
    spread, wf = 0.0, None
    for fi, f in enumerate(c.faces):
        P = p.dual_points[fi]
        n = len(f)
        pts = [_circle_meet(ec[f[k]], er[f[k]], ec[f[(k + 1) % n]], er[f[(k + 1) % n]], P) for k in range(n)]
        s = max(abs(x - y) for x in pts for y in pts)
        s = max(s, max(abs(abs(P - ec[v]) - er[v]) for v in f))
        sc = 1.0 if p.background == HYPERBOLIC else max(1.0, max(er[v] for v in f))
        if s / sc > spread:
            spread, wf = s / sc, fi
    return PatternAudit(worst, spread, we, wf)


def boundary_tangency_gap(p: LaidOutPattern) -> float:
    """Largest |1 - (|c| + ρ)| over boundary horocycles."""
    gaps = [
        abs(1 - (abs(p.euclid_centers[v]) + p.euclid_radii[v]))
        for v in p.complex.boundary_vertices
        if p.kinds.get(v) == HOROCYCLE
    ]
    return max(gaps, default=0.0)


def _triangles(p: LaidOutPattern):
    """Carrier triangles (c_v, c_w, P_f) per face edge, in the model where geodesics are straight."""
    c = p.complex
    if p.background == HYPERBOLIC:
        def k(z):
            return 2 * z / (1 + abs(z) ** 2)
    else:
        def k(z):
            return z
    pts, tags = [], []
    for fi, f in enumerate(c.faces):
        P = k(p.dual_points[fi])
        n = len(f)
        for s in range(n):
            v, w = f[s], f[(s + 1) % n]
            pts.append((k(p.centers[v]), k(p.centers[w]), P))
            tags.append((fi, edge_key(v, w)))
    arr = np.array([[[z.real, z.imag] for z in t] for t in pts]).reshape(-1, 3, 2)
    return arr, tags


def _orient(tri):
    a, b, cc = tri[..., 0, :], tri[..., 1, :], tri[..., 2, :]
    return (b[..., 0] - a[..., 0]) * (cc[..., 1] - a[..., 1]) - (b[..., 1] - a[..., 1]) * (cc[..., 0] - a[..., 0])


def _overlap(A, B, slab):
    """Interior-overlap test for arrays of triangle pairs by separating axes."""
    sep = np.zeros(len(A), dtype=bool)
    for T in (A, B):
        for k in range(3):
            e = T[:, (k + 1) % 3] - T[:, k]
            nrm = np.stack([-e[:, 1], e[:, 0]], axis=1)
            ln = np.linalg.norm(nrm, axis=1)
            nrm = nrm / np.where(ln > 0, ln, 1)[:, None]
            pa = np.einsum("nij,nj->ni", A, nrm)
            pb = np.einsum("nij,nj->ni", B, nrm)
            sep |= (pa.max(1) <= pb.min(1) + slab) | (pb.max(1) <= pa.min(1) + slab)
    return ~sep


def _box_pairs(lo, hi):
    """Index pairs (i < j) whose axis-aligned boxes overlap."""
    order = np.argsort(lo[:, 0], kind="stable")
    lx = lo[order, 0]
    stop = np.searchsorted(lx, hi[order, 0], side="right")
    I, J = [], []
    for k in range(len(order)):
        if stop[k] <= k + 1:
            continue
        js = order[k + 1 : stop[k]]
        i = order[k]
        keep = (lo[js, 1] <= hi[i, 1]) & (lo[i, 1] <= hi[js, 1])
        js = js[keep]
        I.append(np.minimum(i, js))
        J.append(np.maximum(i, js))
    if not I:
        return np.zeros(0, dtype=int), np.zeros(0, dtype=int)
    I, J = np.concatenate(I), np.concatenate(J)
    o = np.lexsort((J, I))
    return I[o], J[o]


@dataclass
class EmbeddingReport:
    embedded: bool
    violations: list
    flipped: list


def check_embedding(p: LaidOutPattern, brute_force: bool = False, slab: float = 1e-12) -> EmbeddingReport:
    """Pairwise overlap test of carrier triangles.

    Kites are split into the triangles (c_v, c_w, P_f) because a kite is
    not convex once its angle at a center exceeds π.  Candidate pairs are
    those with overlapping bounding boxes, found by sorting on x; patterns
    whose radii span many scales defeat a uniform grid.  ``brute_force``
    tests all pairs.
    """
    tris, tags = _triangles(p)
    m = len(tris)
    if m == 0:
        return EmbeddingReport(True, [], [])
    size = float(np.ptp(tris.reshape(-1, 2), axis=0).max()) or 1.0
    sl = slab * max(1.0, size)
    orient = _orient(tris)
    flipped = [tags[i] for i in np.nonzero(orient <= 0)[0]]
    if brute_force:
        I, J = np.triu_indices(m, 1)
    else:
        I, J = _box_pairs(tris.min(1), tris.max(1))
        if len(I) == 0:
            return EmbeddingReport(not flipped, [], flipped)
    viol = []
    chunk = 200_000
    for s in range(0, len(I), chunk):
        ii, jj = I[s : s + chunk], J[s : s + chunk]
        hit = _overlap(tris[ii], tris[jj], sl)
        viol.extend((tags[x], tags[y]) for x, y in zip(ii[hit], jj[hit]))
    viol.sort()
    return EmbeddingReport(not viol and not flipped, viol, flipped)


def maple_audit(p: LaidOutPattern, epsilon: float, shrink: float | None = None) -> dict:
    """Signed clearance of the disk shrunk by sin ε inside the union of incident kites.

    Only interior vertices; Euclidean patterns only.  The union is star
    shaped from the center, so the clearance is the distance from the
    center to the outer polygon (neighbour centers and face points)
    minus sin(ε)·r.
    """
    if p.background != EUCLIDEAN:
        raise PreconditionFailed("maple audit is defined for Euclidean patterns")
    c = p.complex
    s = math.sin(epsilon) if shrink is None else shrink
    out = {}
    for v in c.interior_vertices:
        cv = p.centers[v]
        best = math.inf
        for fi in c.faces_around(v):
            f = c.faces[fi]
            n = len(f)
            k = f.index(v)
            P = p.dual_points[fi]
            for w in (f[(k + 1) % n], f[(k - 1) % n]):
                best = min(best, _seg_dist(cv, p.centers[w], P))
        out[v] = float(best - s * p.radii[v])
    return out


def _seg_dist(z, a, b):
    d = b - a
    t = max(0.0, min(1.0, ((z - a) * d.conjugate()).real / (abs(d) ** 2)))
    return abs(z - (a + t * d))


# -- Gauss-Bonnet loop identity ------------------------------------------------


@dataclass
class LoopAudit:
    residual: float
    angle_sum: float
    exterior_excess: float
    inside: list


def gauss_bonnet_audit(p: LaidOutPattern, gamma) -> LoopAudit:
    """Compare Σ_{v∈γ} Σ_{w∈W} α_v^w with Σ_{e∈γ}(π - Θ) - 2π.

    W is the set of vertices strictly inside γ adjacent to γ.  γ must be
    a simple closed non-facial cycle with no chord inside it.
    """
    c, a, st = p.complex, p.angles, p.state
    gamma = list(gamma)
    if gamma and gamma[0] == gamma[-1]:
        gamma = gamma[:-1]
    n = len(gamma)
    if n < 3 or len(set(gamma)) != n:
        raise PreconditionFailed("loop must be a simple cycle")
    gedges = set()
    for k in range(n):
        e = edge_key(gamma[k], gamma[(k + 1) % n])
        if e not in c.edge_faces:
            raise PreconditionFailed(f"{e} is not an edge")
        gedges.add(e)
    if any({edge_key(f[k], f[(k + 1) % len(f)]) for k in range(len(f))} == gedges for f in c.faces):
        raise PreconditionFailed("loop is a face boundary")
    # split faces along γ
    comp = {}
    for start in range(len(c.faces)):
        if start in comp:
            continue
        tag = start
        comp[start] = tag
        stack = [start]
        while stack:
            fi = stack.pop()
            f = c.faces[fi]
            for k in range(len(f)):
                e = edge_key(f[k], f[(k + 1) % len(f)])
                if e in gedges:
                    continue
                for g in c.edge_faces[e]:
                    if g not in comp:
                        comp[g] = tag
                        stack.append(g)
    groups = {}
    for fi, t in comp.items():
        groups.setdefault(t, []).append(fi)
    inside = None
    for fs in groups.values():
        touches = False
        for fi in fs:
            f = c.faces[fi]
            for k in range(len(f)):
                e = edge_key(f[k], f[(k + 1) % len(f)])
                if e not in gedges and len(c.edge_faces[e]) == 1:
                    touches = True
        if not touches:
            inside = fs
            break
    if inside is None:
        raise PreconditionFailed("could not find the inside of the loop")
    in_faces = set(inside)
    in_edges = set()
    for fi in in_faces:
        f = c.faces[fi]
        for k in range(len(f)):
            in_edges.add(edge_key(f[k], f[(k + 1) % len(f)]))
    gset = set(gamma)
    chords = [e for e in in_edges - gedges if e[0] in gset and e[1] in gset]
    if chords:
        raise HasChord(f"loop has chords inside: {sorted(chords)[:3]}")
    in_verts = {x for fi in in_faces for x in c.faces[fi]} - gset
    W = sorted(w for w in in_verts if any(x in gset for x in c.neighbors[w]))
    total = 0.0
    for v in gamma:
        for w in c.neighbors[v]:
            if w in W:
                al, _, _ = edge_terms(st.background, st.u[v], st.u[w], a[(v, w)])
                total += float(al)
    rhs = math.fsum(math.pi - a[e] for e in gedges) - 2 * math.pi
    return LoopAudit(abs(total - rhs), total, rhs, W)


# -- SVG ----------------------------------------------------------------------


def _fmt(x: float) -> str:
    return f"{x:.9g}"


def export_svg(p: LaidOutPattern, path=None, layers=("circles", "dual"), size: int = 800) -> str:
    """Render the pattern; ``layers`` may include circles, quads, dual, labels.

    No layers at all means circles only.
    """
    layers = set(layers or ()) or {"circles"}
    ec, er = p.euclid_centers, p.euclid_radii
    if p.background == HYPERBOLIC:
        x0, y0, x1, y1 = -1.0, -1.0, 1.0, 1.0
    else:
        x0 = min(ec[v].real - er[v] for v in ec)
        x1 = max(ec[v].real + er[v] for v in ec)
        y0 = min(ec[v].imag - er[v] for v in ec)
        y1 = max(ec[v].imag + er[v] for v in ec)
    span = max(x1 - x0, y1 - y0) or 1.0
    pad = 0.02 * span
    k = size / (span + 2 * pad)

    def X(z):
        return (z.real - x0 + pad) * k

    def Y(z):
        return (y1 - z.imag + pad) * k

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{size}" height="{size}">',
    ]
    if p.background == HYPERBOLIC:
        out.append(
            f'<circle class="frame" cx="{_fmt(X(0j))}" cy="{_fmt(Y(0j))}" r="{_fmt(k)}" '
            'fill="none" stroke="black" stroke-width="1.5"/>'
        )
    if "quads" in layers:
        c = p.complex
        for fi, f in enumerate(c.faces):
            P = p.dual_points[fi]
            for s in range(len(f)):
                v, w = f[s], f[(s + 1) % len(f)]
                pts = " ".join(f"{_fmt(X(z))},{_fmt(Y(z))}" for z in (ec[v], ec[w], P))
                out.append(f'<polygon class="quad" points="{pts}" fill="#ddeeff" stroke="#99aacc" stroke-width="0.3"/>')
    if "circles" in layers:
        for v in sorted(ec):
            out.append(
                f'<circle class="circle" id="v{v}" cx="{_fmt(X(ec[v]))}" cy="{_fmt(Y(ec[v]))}" '
                f'r="{_fmt(er[v] * k)}" fill="none" stroke="#1f4e9a" stroke-width="0.8"/>'
            )
    if "dual" in layers:
        for fi in sorted(p.dual_points):
            z = p.dual_points[fi]
            out.append(f'<circle class="dual" cx="{_fmt(X(z))}" cy="{_fmt(Y(z))}" r="1.5" fill="#c0392b"/>')
    if "labels" in layers:
        for v in sorted(ec):
            out.append(
                f'<text x="{_fmt(X(p.centers[v]))}" y="{_fmt(Y(p.centers[v]))}" font-size="8" '
                f'text-anchor="middle">{v}</text>'
            )
    out.append("</svg>")
    text = "\n".join(out) + "\n"
    if path is not None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    return text


# -- polyhedron lift -----------------------------------------------------------


def to_sphere(z):
    """Inverse stereographic projection from the north pole onto the unit sphere."""
    z = np.asarray(z, dtype=complex)
    m = np.abs(z) ** 2
    return np.stack([2 * z.real, 2 * z.imag, m - 1], axis=-1) / (m + 1)[..., None]


def from_sphere(x):
    x = np.asarray(x, dtype=float)
    return (x[..., 0] + 1j * x[..., 1]) / (1 - x[..., 2])


@dataclass
class PolyhedronLift:
    ideal_vertices: dict
    planes: dict
    faces: dict
    dihedral: dict
    max_dihedral_error: float
    max_incidence_error: float
    roundtrip_error: float

    def to_obj(self, path=None) -> str:
        order = sorted(self.ideal_vertices)
        idx = {fi: k + 1 for k, fi in enumerate(order)}
        lines = ["# ideal vertices on the unit sphere, one face per circle"]
        for fi in order:
            x = self.ideal_vertices[fi]
            lines.append("v " + " ".join(f"{t:.17g}" for t in x))
        for v in sorted(self.faces):
            lines.append("f " + " ".join(str(idx[fi]) for fi in self.faces[v]))
        text = "\n".join(lines) + "\n"
        if path is not None:
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(text)
        return text


def sphere_plane(center: complex, radius: float):
    """Plane n·X = h of the sphere image of a planar circle, with the disk on the side n·X >= h.

    From |z - c|² = ρ² and z = (x1 + i x2)/(1 - x3):
    -2 c_x x1 - 2 c_y x2 + (1 - k) x3 = -(1 + k) with k = |c|² - ρ².
    """
    k = (abs(center) - radius) * (abs(center) + radius)
    n = np.array([-2 * center.real, -2 * center.imag, 1 - k])
    h = -(1 + k)
    ln = float(np.linalg.norm(n))
    n, h = n / ln, h / ln
    if n[2] >= h:  # keep the north pole outside the cap
        n, h = -n, -h
    return n, h


def _sin_angular_radius(center, radius):
    # 1 - h² = 4ρ² / |N|², so this avoids the cancellation in sqrt(1 - h²)
    k = (abs(center) - radius) * (abs(center) + radius)
    return 2 * radius / math.sqrt(4 * abs(center) ** 2 + (1 - k) ** 2)


def lift_to_polyhedron(p: LaidOutPattern, check_embedded: bool = True) -> PolyhedronLift:
    """Map circles to sphere circles (hyperbolic planes) and face points to ideal vertices.

    The dihedral angle between the planes of v and w is read off the
    sphere circles: cos Θ = (h_v h_w - n_v·n_w) / sqrt((1-h_v²)(1-h_w²))
    for caps n·x >= h.
    """
    if check_embedded and not check_embedding(p).embedded:
        raise NotEmbedded("pattern is not embedded")
    c, a = p.complex, p.angles
    ec, er = p.euclid_centers, p.euclid_radii
    # scale planar patterns to unit size so the sphere image is well spread
    s = 1.0
    if p.background == EUCLIDEAN:
        s = 1.0 / max(max(abs(ec[v]) + er[v] for v in ec), 1e-300)
    planes, sin_psi = {}, {}
    rt = 0.0
    for v in c.vertices:
        z = np.array([s * (ec[v] + er[v] * cmath.exp(1j * t)) for t in (0.3, 2.4, 4.5)])
        X = to_sphere(z)
        rt = max(rt, float(np.max(np.abs(from_sphere(X) - z))))
        planes[v] = sphere_plane(s * ec[v], s * er[v])
        sin_psi[v] = _sin_angular_radius(s * ec[v], s * er[v])
    ideal = {}
    for fi, P in p.dual_points.items():
        X = to_sphere(np.array([s * P]))[0]
        rt = max(rt, abs(complex(from_sphere(X)) - s * P))
        ideal[fi] = X
    inc = 0.0
    for fi, f in enumerate(c.faces):
        for v in f:
            n, h = planes[v]
            inc = max(inc, abs(float(n @ ideal[fi]) - h))
    dihedral = {}
    worst = 0.0
    for e in c.edges:
        (n1, h1), (n2, h2) = planes[e[0]], planes[e[1]]
        x = (h1 * h2 - float(n1 @ n2)) / (sin_psi[e[0]] * sin_psi[e[1]])
        th = math.acos(max(-1.0, min(1.0, x)))
        if abs(x) > 0.5:
            # acos is ill conditioned near ±1; use the tangents at an ideal vertex
            X = ideal[c.edge_faces[e][0]]
            t1, t2 = np.cross(n1, X), np.cross(n2, X)
            g = math.atan2(float(np.linalg.norm(np.cross(t1, t2))), float(t1 @ t2))
            th = g if (math.cos(g) > 0) == (x > 0) else math.pi - g
        dihedral[e] = th
        worst = max(worst, abs(th - a[e]))
    faces = {}
    for v in c.vertices:
        around = c.faces_around(v)
        if c.is_boundary(v) and len(around) < 3:
            continue
        faces[v] = list(around)
    return PolyhedronLift(ideal, planes, faces, dihedral, worst, inc, rt)
