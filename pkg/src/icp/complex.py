"""Disk cellular decompositions.

A :class:`CellComplex` is built from a list of face cycles.  Construction
validates that the cells form a finite disk and orients every face
consistently, so later code can walk around vertices and along the
boundary without re-checking.

Also here: the barycentric-style subdivision used for extremal length
comparisons, exhaustion of infinite generators by combinatorial balls,
and the fixture families (square lattice, layered degree-7 triangulation,
wheels and the ladder example whose boundary angles approach π).
"""

from __future__ import annotations

import math
from collections import defaultdict, deque
from dataclasses import dataclass

from .angles import AngleData, Edge, edge_key
from .errors import (
    FacesShareTwoEdges,
    FaceTooSmall,
    GeneratorExhausted,
    InvalidDeltaSequence,
    NonManifoldEdge,
    NotADisk,
)


def _cycle_edges(face):
    n = len(face)
    for i in range(n):
        yield face[i], face[(i + 1) % n]


def _reverse(face):
    return (face[0],) + tuple(reversed(face[1:]))


class CellComplex:
    """Finite disk cellular decomposition with consistently oriented faces.

    Parameters
    ----------
    faces : sequence of sequences of int
        Vertex cycles.  Orientation of the first face is kept; the others
        are flipped as needed to agree with it.

    Attributes
    ----------
    vertices : tuple of int
        Sorted vertex ids.
    faces : tuple of tuple of int
        Oriented face cycles.
    edges : tuple of (int, int)
        Sorted edge keys, each as a sorted pair.
    boundary_edges, boundary_vertices : frozenset
    interior_vertices : tuple of int
    """

    def __init__(self, faces):
        faces = [tuple(int(v) for v in f) for f in faces]
        if not faces:
            raise NotADisk("no faces")
        for i, f in enumerate(faces):
            if len(f) < 3:
                raise FaceTooSmall(f"face {i} has {len(f)} edges; need at least 3")
            if len(set(f)) != len(f):
                raise NotADisk(f"face {i} repeats a vertex: {f}")

        edge_faces: dict[Edge, list[int]] = defaultdict(list)
        for i, f in enumerate(faces):
            for a, b in _cycle_edges(f):
                edge_faces[edge_key(a, b)].append(i)
        for e, fs in edge_faces.items():
            if len(fs) > 2:
                raise NonManifoldEdge(f"edge {e} lies on {len(fs)} faces")

        shared: dict[tuple[int, int], int] = defaultdict(int)
        for e, fs in edge_faces.items():
            if len(fs) == 2:
                pair = (min(fs), max(fs))
                shared[pair] += 1
                if shared[pair] > 1:
                    raise FacesShareTwoEdges(f"faces {pair[0]} and {pair[1]} share two edges")

        faces = self._orient(faces, edge_faces)

        self.faces = tuple(faces)
        self.vertices = tuple(sorted({v for f in faces for v in f}))
        self.edges = tuple(sorted(edge_faces))
        self.edge_faces = {e: tuple(fs) for e, fs in edge_faces.items()}
        # directed edge (a, b) -> face in which a is followed by b
        self.half_edges = {(a, b): i for i, f in enumerate(faces) for a, b in _cycle_edges(f)}

        nbrs = defaultdict(set)
        for a, b in self.edges:
            nbrs[a].add(b)
            nbrs[b].add(a)
        self.neighbors = {v: tuple(sorted(nbrs[v])) for v in self.vertices}

        vf = defaultdict(list)
        for i, f in enumerate(faces):
            for v in f:
                vf[v].append(i)
        self.vertex_faces = {v: tuple(vf[v]) for v in self.vertices}

        self.boundary_edges = frozenset(e for e, fs in edge_faces.items() if len(fs) == 1)
        self.boundary_vertices = frozenset(v for e in self.boundary_edges for v in e)
        self.interior_vertices = tuple(v for v in self.vertices if v not in self.boundary_vertices)
        self.interior_edges = tuple(e for e in self.edges if e not in self.boundary_edges)

        self._check_disk()

    # -- validation -------------------------------------------------------

    @staticmethod
    def _orient(faces, edge_faces):
        faces = list(faces)
        done = [False] * len(faces)
        adj = defaultdict(list)
        for e, fs in edge_faces.items():
            if len(fs) == 2:
                adj[fs[0]].append(fs[1])
                adj[fs[1]].append(fs[0])
        for start in range(len(faces)):
            if done[start]:
                continue
            done[start] = True
            queue = deque([start])
            while queue:
                i = queue.popleft()
                directed = set(_cycle_edges(faces[i]))
                for j in adj[i]:
                    agree = any((a, b) in directed for a, b in _cycle_edges(faces[j]))
                    if done[j]:
                        if agree:
                            raise NotADisk("faces cannot be oriented consistently")
                        continue
                    if agree:
                        faces[j] = _reverse(faces[j])
                    done[j] = True
                    queue.append(j)
        return faces

    def _check_disk(self):
        V, E, F = len(self.vertices), len(self.edges), len(self.faces)
        # connectivity of the 1-skeleton
        seen = {self.vertices[0]}
        stack = [self.vertices[0]]
        while stack:
            v = stack.pop()
            for w in self.neighbors[v]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        if len(seen) != V:
            raise NotADisk("1-skeleton is disconnected")
        if V - E + F != 1:
            raise NotADisk(f"Euler characteristic {V - E + F}, expected 1")
        # each vertex link must be a single fan (path or cycle of faces)
        for v in self.vertices:
            fs = self.vertex_faces[v]
            parent = {f: f for f in fs}

            def find(x):
                while parent[x] != x:
                    parent[x] = parent[parent[x]]
                    x = parent[x]
                return x

            for w in self.neighbors[v]:
                pair = self.edge_faces[edge_key(v, w)]
                if len(pair) == 2:
                    parent[find(pair[0])] = find(pair[1])
            if len({find(f) for f in fs}) != 1:
                raise NotADisk(f"vertex {v} is a pinch point")
            nb = sum(1 for w in self.neighbors[v] if edge_key(v, w) in self.boundary_edges)
            if nb not in (0, 2):
                raise NotADisk(f"vertex {v} has {nb} boundary edges")
        if not self.boundary_edges:
            raise NotADisk("complex has no boundary")
        if len(self.boundary_cycle()) != len(self.boundary_edges):
            raise NotADisk("boundary is not a single loop")

    # -- queries ----------------------------------------------------------

    def degree(self, v: int) -> int:
        return len(self.neighbors[v])

    def face_degree(self, i: int) -> int:
        return len(self.faces[i])

    def is_boundary(self, v: int) -> bool:
        return v in self.boundary_vertices

    def boundary_cycle(self) -> list[int]:
        """Boundary vertices in the order induced by the face orientation."""
        nxt = {}
        for a, b in self.boundary_edges:
            if (a, b) in self.half_edges:
                nxt[a] = b
            else:
                nxt[b] = a
        start = min(nxt)
        cyc = [start]
        v = nxt[start]
        while v != start and len(cyc) <= len(nxt):
            cyc.append(v)
            v = nxt[v]
        return cyc

    def faces_around(self, v: int) -> list[int]:
        """Faces containing ``v`` in rotational order (a fan for boundary vertices)."""
        fs = self.vertex_faces[v]

        def pred_succ(i):
            f = self.faces[i]
            k = f.index(v)
            return f[k - 1], f[(k + 1) % len(f)]

        start = fs[0]
        if v in self.boundary_vertices:
            for i in fs:
                _, b = pred_succ(i)
                if (b, v) not in self.half_edges:
                    start = i
                    break
        order = [start]
        i = start
        while True:
            a, _ = pred_succ(i)
            j = self.half_edges.get((v, a))
            if j is None or j == start:
                break
            order.append(j)
            i = j
        return order

    def outer_boundary(self, W) -> set[int]:
        """Vertices outside ``W`` adjacent to some vertex of ``W``."""
        W = set(W)
        return {w for v in W for w in self.neighbors[v] if w not in W}

    def classify_boundary(self):
        """(interior vertices, boundary vertices, interior edges, boundary edges)."""
        return (
            set(self.interior_vertices),
            set(self.boundary_vertices),
            set(self.interior_edges),
            set(self.boundary_edges),
        )

    def graph_distances(self, sources) -> dict[int, int]:
        dist = {s: 0 for s in sources}
        queue = deque(dist)
        while queue:
            v = queue.popleft()
            for w in self.neighbors[v]:
                if w not in dist:
                    dist[w] = dist[v] + 1
                    queue.append(w)
        return dist

    def max_degree(self) -> int:
        return max(len(n) for n in self.neighbors.values())

    def same_combinatorics(self, other: "CellComplex") -> bool:
        def canon(f):
            k = f.index(min(f))
            rot = f[k:] + f[:k]
            return min(rot, _reverse(rot))

        return self.vertices == other.vertices and sorted(map(canon, self.faces)) == sorted(
            map(canon, other.faces)
        )

    def __repr__(self):
        return (
            f"CellComplex(V={len(self.vertices)}, E={len(self.edges)}, F={len(self.faces)}, "
            f"interior={len(self.interior_vertices)})"
        )


def build_complex(face_list) -> CellComplex:
    return CellComplex(face_list)


def classify_boundary(c: CellComplex):
    return c.classify_boundary()


# -- subdivision -----------------------------------------------------------


@dataclass(frozen=True)
class Subdivision:
    parent: CellComplex
    dual_vertices: dict  # face index -> new vertex id
    triangulation: CellComplex


def subdivide(c: CellComplex) -> Subdivision:
    """Add one vertex per face joined to every vertex of that face."""
    base = max(c.vertices) + 1
    dual = {i: base + i for i in range(len(c.faces))}
    tris = []
    for i, f in enumerate(c.faces):
        for a, b in _cycle_edges(f):
            tris.append((a, b, dual[i]))
    return Subdivision(c, dual, CellComplex(tris))


# -- exhaustion ------------------------------------------------------------


@dataclass(frozen=True)
class ExhaustionLevel:
    level: int
    complex: CellComplex
    angles: AngleData | None

    def includes_into(self, nxt: "ExhaustionLevel") -> bool:
        """True when every face of this level is a face of ``nxt`` (labels kept)."""
        mine = {frozenset(f) for f in self.complex.faces}
        theirs = {frozenset(f) for f in nxt.complex.faces}
        return mine <= theirs


def _canon_face(f):
    f = tuple(f)
    k = f.index(min(f))
    rot = f[k:] + f[:k]
    return min(rot, _reverse(rot))


def _try_complex(faces):
    try:
        return CellComplex(sorted(faces)), None
    except (NotADisk, NonManifoldEdge) as err:
        return None, err


def _repair(faces: set, gen, max_rounds: int = 50) -> CellComplex:
    """Grow a face set until it is a disk.

    First every generator face spanned by present vertices is added (closes
    holes whose rim is already there), then whole stars of pinch and hole
    vertices are added.  Repeats until validation passes.
    """
    for _ in range(max_rounds):
        verts = {v for f in faces for v in f}
        grown = set(faces)
        for v in verts:
            for f in gen.faces_at(v):
                if all(x in verts for x in f):
                    grown.add(_canon_face(f))
        faces = grown
        c, err = _try_complex(faces)
        if c is not None:
            return c
        # find trouble spots: vertices whose incident boundary structure is bad
        edge_count = defaultdict(int)
        for f in faces:
            for a, b in _cycle_edges(f):
                edge_count[edge_key(a, b)] += 1
        bd = defaultdict(int)
        for e, k in edge_count.items():
            if k == 1:
                bd[e[0]] += 1
                bd[e[1]] += 1
        bad = [v for v, k in bd.items() if k > 2]
        if not bad:
            # holes: add stars of all boundary vertices that are not on the
            # outermost boundary component
            comps = _boundary_components(edge_count)
            if len(comps) <= 1:
                raise NotADisk(f"cannot repair exhaustion level: {err}")
            outer = max(comps, key=len)
            bad = [v for comp in comps if comp is not outer for v in comp]
        for v in bad:
            for f in gen.faces_at(v):
                faces.add(_canon_face(f))
    raise NotADisk("exhaustion repair did not converge")


def _boundary_components(edge_count):
    adj = defaultdict(set)
    for (a, b), k in edge_count.items():
        if k == 1:
            adj[a].add(b)
            adj[b].add(a)
    comps, seen = [], set()
    for v in sorted(adj):
        if v in seen:
            continue
        comp, stack = [], [v]
        seen.add(v)
        while stack:
            x = stack.pop()
            comp.append(x)
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        comps.append(comp)
    return comps


def exhaust(gen, root: int | None = None, n: int = 0) -> ExhaustionLevel:
    """Level ``n`` of the exhaustion of ``gen`` around ``root``.

    Level n is the star of the combinatorial ball of radius max(n - 1, 0),
    so levels 0 and 1 are both the faces at the root.  Generators with
    their own natural levels (the ladder example) return those instead.
    """
    if n < 0:
        raise ValueError("level must be nonnegative")
    natural = getattr(gen, "level", None)
    if natural is not None and root is None:
        c, a = natural(n)
        return ExhaustionLevel(n, c, a)
    r = gen.root if root is None else root
    depth = max(n - 1, 0)
    dist = {r: 0}
    frontier = [r]
    for d in range(depth):
        nxt = []
        for v in frontier:
            for f in gen.faces_at(v):
                for w in f:
                    if w not in dist:
                        dist[w] = d + 1
                        nxt.append(w)
        if not nxt:
            raise GeneratorExhausted(f"generator has no vertices at distance {d + 1}")
        frontier = nxt
    faces = {_canon_face(f) for v in dist for f in gen.faces_at(v)}
    c = _repair(faces, gen)
    angles = None
    if hasattr(gen, "theta"):
        angles = AngleData({e: gen.theta(e) for e in c.edges})
    return ExhaustionLevel(n, c, angles)


# -- generators ------------------------------------------------------------


def _zigzag(x: int) -> int:
    return 2 * x if x >= 0 else -2 * x - 1


def _unzigzag(z: int) -> int:
    return z // 2 if z % 2 == 0 else -(z + 1) // 2


def lattice_id(x: int, y: int) -> int:
    """Stable nonnegative id for the lattice point (x, y)."""
    a, b = _zigzag(x), _zigzag(y)
    return (a + b) * (a + b + 1) // 2 + b


def lattice_point(i: int) -> tuple[int, int]:
    s = int((math.isqrt(8 * i + 1) - 1) // 2)
    b = i - s * (s + 1) // 2
    a = s - b
    return _unzigzag(a), _unzigzag(b)


class SquareLatticeGenerator:
    """The infinite square lattice with orthogonal intersection angles."""

    finite = False

    def __init__(self):
        self.root = lattice_id(0, 0)

    def faces_at(self, v):
        x, y = lattice_point(v)
        out = []
        for dx, dy in ((0, 0), (-1, 0), (-1, -1), (0, -1)):
            x0, y0 = x + dx, y + dy
            out.append(
                (
                    lattice_id(x0, y0),
                    lattice_id(x0 + 1, y0),
                    lattice_id(x0 + 1, y0 + 1),
                    lattice_id(x0, y0 + 1),
                )
            )
        return out

    def theta(self, e):
        return math.pi / 2


class Deg7Generator:
    """Layered triangulation in which every vertex has degree 7.

    Rings are built outward on demand; vertex ids are assigned ring by ring
    so they never change as more rings are generated.
    """

    finite = False

    def __init__(self, theta: float = math.pi / 3):
        self.root = 0
        self._theta = theta
        self.rings = [[0]]
        self.ring_of = {0: 0}
        self._faces = defaultdict(list)
        self._degree = defaultdict(int)
        self._next_id = 1
        self._build_first_ring()

    def _add_face(self, f):
        for v in f:
            self._faces[v].append(f)

    def _link(self, a, b):
        self._degree[a] += 1
        self._degree[b] += 1

    def _new(self, ring):
        v = self._next_id
        self._next_id += 1
        self.ring_of[v] = ring
        return v

    def _build_first_ring(self):
        ring = [self._new(1) for _ in range(7)]
        for k in range(7):
            a, b = ring[k], ring[(k + 1) % 7]
            self._add_face((0, a, b))
            self._link(0, a)
            self._link(a, b)
        self.rings.append(ring)

    def _grow(self):
        old = self.rings[-1]
        k = len(self.rings)
        need = [7 - self._degree[v] for v in old]
        runs = []
        first_shared = self._new(k)
        new_ring = [first_shared]
        prev_shared = first_shared
        for i, v in enumerate(old):
            run = [prev_shared]
            for _ in range(need[i] - 2):
                w = self._new(k)
                run.append(w)
                new_ring.append(w)
            if i == len(old) - 1:
                last = first_shared
            else:
                last = self._new(k)
                new_ring.append(last)
            run.append(last)
            runs.append(run)
            prev_shared = last
        for i, v in enumerate(old):
            run = runs[i]
            for j in range(len(run) - 1):
                self._add_face((v, run[j], run[j + 1]))
            v_next = old[(i + 1) % len(old)]
            self._add_face((v, run[-1], v_next))
            for w in run:
                self._link(v, w)
        for j in range(len(new_ring)):
            self._link(new_ring[j], new_ring[(j + 1) % len(new_ring)])
        self.rings.append(new_ring)

    def ensure_rings(self, k):
        while len(self.rings) <= k:
            self._grow()

    def faces_at(self, v):
        while v >= self._next_id:
            self._grow()
        self.ensure_rings(self.ring_of[v] + 1)
        return list(self._faces[v])

    def theta(self, e):
        return self._theta


class FiniteGenerator:
    """Wrap a finite complex so it can be exhausted like an infinite one."""

    finite = True

    def __init__(self, c: CellComplex, angles: AngleData | None = None, root: int | None = None):
        self.c = c
        self.angles = angles
        self.root = c.interior_vertices[0] if root is None and c.interior_vertices else (
            c.vertices[0] if root is None else root
        )

    def faces_at(self, v):
        return [self.c.faces[i] for i in self.c.vertex_faces.get(v, ())]

    def theta(self, e):
        if self.angles is None:
            raise AttributeError("no angles attached")
        return self.angles[e]


# -- ladder example --------------------------------------------------------


def default_deltas(count: int) -> list[float]:
    """δ_n = 2^(-3n-2): positive, decreasing, and sin δ_n < 2^(-3n-1)."""
    return [2.0 ** (-3 * n - 2) for n in range(count)]


def check_deltas(deltas) -> None:
    d = [float(x) for x in deltas]
    if not d:
        raise InvalidDeltaSequence("empty delta sequence")
    if not all(x > 0 and math.isfinite(x) for x in d):
        raise InvalidDeltaSequence("deltas must be positive and finite")
    if d[0] >= math.pi / 2:
        raise InvalidDeltaSequence("delta_0 must be below pi/2")
    for n in range(1, len(d)):
        if not d[n] < d[n - 1]:
            raise InvalidDeltaSequence(f"deltas must strictly decrease (index {n})")
    for n, x in enumerate(d):
        if not math.sin(x) < 2.0 ** (-3 * n - 1):
            raise InvalidDeltaSequence(f"sin(delta_{n}) must be below 2^-{3 * n + 1}")


def ring_epsilon(i: int, delta_i: float) -> float:
    """Exterior angle on each boundary edge of level i."""
    return (2 * math.pi + delta_i) / 2 ** (3 + 2 * i)


class KeyexampleGenerator:
    """Wheel W8 grown by one ladder annulus per level.

    Level 0 is the wheel with eight triangles.  To pass from level i to
    i+1, every boundary edge (b, b') of level i gets a strip of eight new
    vertices a0..a7 and four new boundary vertices w0..w3:

    * b is joined to a0, a2, a4, a6 (three quads [b, a0, a1, a2], ...);
    * the pentagon [b, b', a0', a7, a6] closes the gap under the old edge,
      where a0' is the first strip vertex of the next edge;
    * rungs a1-w0, a3-w1, a5-w2, a7-w3 carry pentagons whose outer edge is
      a new boundary edge, so the boundary length grows by a factor 4.

    Exterior weights φ = π - Θ, with ε the old and ε' the new boundary
    exterior angle: spokes and quad strip edges π/2; the two pentagon
    strip edges π/2 - ε/2; rungs π/2 - ε'/2 except a7-w3 which gets
    π/2 - ε'/2 + ε/2.  Every face then sums to exactly 2π, all non-ring
    angles stay within ε₀/2 of π/2 (spokes of the wheel aside), and each
    old boundary vertex ends with degree 7.
    """

    finite = False

    def __init__(self, deltas=None, max_level: int | None = None):
        if deltas is None:
            deltas = default_deltas(12 if max_level is None else max_level + 1)
        check_deltas(deltas)
        self.deltas = [float(x) for x in deltas]
        self.root = 0
        self._faces = [tuple([0, k, k % 8 + 1]) for k in range(1, 9)]
        s = (2 * math.pi + self.deltas[0]) / 16
        eps0 = ring_epsilon(0, self.deltas[0])
        phi = {}
        for k in range(1, 9):
            phi[edge_key(0, k)] = math.pi - s
            phi[edge_key(k, k % 8 + 1)] = eps0
        self._phi = phi
        self._rings = [list(range(1, 9))]
        self._nfaces = [8]
        self._next = 9

    @property
    def built_levels(self) -> int:
        return len(self._rings) - 1

    def epsilon(self, i: int) -> float:
        return ring_epsilon(i, self.deltas[i])

    def _grow(self):
        i = len(self._rings) - 1
        if i + 1 >= len(self.deltas):
            raise InvalidDeltaSequence(f"need delta_{i + 1} to build level {i + 1}")
        eps, eps_new = self.epsilon(i), self.epsilon(i + 1)
        ring = self._rings[-1]
        N = len(ring)
        nid = self._next
        A = [[nid + 8 * j + k for k in range(8)] for j in range(N)]
        nid += 8 * N
        W = [[nid + 4 * j + t for t in range(4)] for j in range(N)]
        nid += 4 * N
        self._next = nid
        half = math.pi / 2
        phi = self._phi
        faces = self._faces
        for j in range(N):
            b, b2 = ring[j], ring[(j + 1) % N]
            a, a_next = A[j], A[(j + 1) % N]
            w, w_next = W[j], W[(j + 1) % N]
            for p in (0, 2, 4):
                faces.append((b, a[p], a[p + 1], a[p + 2]))
            faces.append((b, b2, a_next[0], a[7], a[6]))
            faces.append((w[0], w[1], a[3], a[2], a[1]))
            faces.append((w[1], w[2], a[5], a[4], a[3]))
            faces.append((w[2], w[3], a[7], a[6], a[5]))
            faces.append((w[3], w_next[0], a_next[1], a_next[0], a[7]))
            for p in (0, 2, 4, 6):
                phi[edge_key(b, a[p])] = half
            for k in range(6):
                phi[edge_key(a[k], a[k + 1])] = half
            phi[edge_key(a[6], a[7])] = half - eps / 2
            phi[edge_key(a[7], a_next[0])] = half - eps / 2
            for t, k in enumerate((1, 3, 5)):
                phi[edge_key(a[k], w[t])] = half - eps_new / 2
            phi[edge_key(a[7], w[3])] = half - eps_new / 2 + eps / 2
            for t in range(3):
                phi[edge_key(w[t], w[t + 1])] = eps_new
            phi[edge_key(w[3], w_next[0])] = eps_new
        self._rings.append([v for j in range(N) for v in W[j]])
        self._nfaces.append(len(faces))

    def level(self, i: int):
        """(complex, angles) of level i."""
        while self.built_levels < i:
            self._grow()
        faces = self._faces[: self._nfaces[i]]
        c = CellComplex(faces)
        angles = AngleData({e: math.pi - self._phi[e] for e in c.edges})
        return c, angles

    def ring(self, i: int) -> list[int]:
        while self.built_levels < i:
            self._grow()
        return list(self._rings[i])

    def faces_at(self, v):
        while v >= self._next:
            self._grow()
        # a vertex on ring i gets its last faces at level i + 1
        for i, ring in enumerate(self._rings):
            if v in ring or v == 0:
                break
        else:
            i = len(self._rings) - 1
        while self.built_levels < i + 1:
            self._grow()
        return [f for f in self._faces if v in f]

    def theta(self, e):
        return math.pi - self._phi[edge_key(*e)]


def generate_keyexample(i: int, deltas=None):
    """Level ``i`` of the ladder example as (CellComplex, AngleData)."""
    if i < 0:
        raise ValueError("level must be nonnegative")
    if deltas is not None and len(deltas) < i + 1:
        raise InvalidDeltaSequence(f"need at least {i + 1} deltas for level {i}")
    gen = KeyexampleGenerator(deltas if deltas is not None else default_deltas(i + 1))
    return gen.level(i)


# -- finite fixtures -------------------------------------------------------


def square_patch(n: int):
    """n x n square faces; vertex (x, y) has id y*(n+1) + x."""
    faces = []
    for y in range(n):
        for x in range(n):
            v = y * (n + 1) + x
            faces.append((v, v + 1, v + n + 2, v + n + 1))
    return CellComplex(faces)


def wheel(n: int):
    """Hub 0 with rim 1..n."""
    if n < 3:
        raise ValueError("a wheel needs at least 3 rim vertices")
    return CellComplex([(0, k, k % n + 1) for k in range(1, n + 1)])


def wheel_angles(c: CellComplex, spoke: float | None = None) -> AngleData:
    """Spoke angle s and rim angle π - 2s make every triangle sum to 2π."""
    n = len(c.vertices) - 1
    s = (math.pi / n + math.pi / 2) / 2 if spoke is None else spoke
    theta = {}
    for e in c.edges:
        theta[e] = s if 0 in e else math.pi - 2 * s
    return AngleData(theta)


def deg7_patch(n: int, theta: float = math.pi / 3):
    gen = Deg7Generator(theta)
    gen.ensure_rings(n)
    keep = {v for k in range(n + 1) for v in gen.rings[k]}
    faces = set()
    for v in keep:
        for f in gen._faces[v]:
            if all(x in keep for x in f):
                faces.add(f)
    return CellComplex(sorted(faces))


def generate_lattice(kind: str, size: int):
    """Finite fixture patch and its default angles.

    ``square``: size x size faces, all angles π/2.
    ``triangulated_deg7``: rings 0..size of the degree-7 triangulation,
    all angles π/3.  ``wheel``: hub with ``size`` rim vertices.
    """
    if size < 1:
        raise ValueError("size must be at least 1")
    if kind == "square":
        c = square_patch(size)
        return c, AngleData.constant(c.edges, math.pi / 2)
    if kind in ("triangulated_deg7", "deg7"):
        c = deg7_patch(size)
        return c, AngleData.constant(c.edges, math.pi / 3)
    if kind == "wheel":
        c = wheel(size)
        return c, wheel_angles(c)
    raise ValueError(f"unknown lattice kind {kind!r}")
