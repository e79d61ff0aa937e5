"""Triangulated graph manifolds.

Every graph vertex of degree d becomes P x S^1, where P is the genus-one
surface with d boundary circles.  Graph edges glue the matching boundary
tori by a map that swaps fibre and longitude.

P is a polygon with side word ``a b a' b'`` followed by ``x_i c_i x_i'``
for each boundary circle, coned off from a centre point.  Its triangles are
ordered (centre, tail, head) along each side, which makes P an ordered
Delta-complex.  Each prism over a triangle is cut into three tetrahedra in
that vertex order, and the top of the stack is glued back to the bottom.
Since every gluing preserves vertex order, no edge is ever identified with
its own reverse.

Tetrahedra per piece: 3 * (4 + 3d) = 12 + 9d.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .graphs import FiniteGraph
from .intmat import smith_diagonal_sparse

PIECE_SLOPE = 9
PIECE_OFFSET = 12

Perm = tuple[int, int, int, int]
Gluing = tuple[int, int, Perm]


class TriangulationError(ValueError):
    pass


def _perm_inverse(p: Perm) -> Perm:
    inv = [0] * 4
    for i, x in enumerate(p):
        inv[x] = i
    return tuple(inv)


def _perm_sign(p: Perm) -> int:
    sign = 1
    seen = [False] * 4
    for i in range(4):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = p[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


@dataclass(frozen=True)
class Triangulation:
    """``gluings[4 * tet + face]`` is ``(tet', face', perm)`` or ``None``.

    ``perm[i]`` is the corner of ``tet'`` that corner ``i`` of ``tet`` lands
    on; face ``k`` is the face opposite corner ``k``.
    """

    tet_count: int
    gluings: tuple[Gluing | None, ...]

    def __post_init__(self):
        if len(self.gluings) != 4 * self.tet_count:
            raise TriangulationError("gluing table does not have four faces per tetrahedron")

    def glued(self, tet: int, face: int) -> Gluing | None:
        return self.gluings[4 * tet + face]

    def relabel(self, perm) -> "Triangulation":
        """Renumber tetrahedra: old ``t`` becomes ``perm[t]``."""
        if sorted(perm) != list(range(self.tet_count)):
            raise TriangulationError("relabeling is not a permutation of the tetrahedra")
        table: list[Gluing | None] = [None] * (4 * self.tet_count)
        for t in range(self.tet_count):
            for f in range(4):
                g = self.glued(t, f)
                if g is not None:
                    table[4 * perm[t] + f] = (perm[g[0]], g[1], g[2])
        return Triangulation(self.tet_count, tuple(table))


class _Builder:
    def __init__(self):
        self.count = 0
        self.table: dict[tuple[int, int], Gluing] = {}

    def add(self, k: int) -> int:
        first = self.count
        self.count += k
        return first

    def glue(self, t: int, corners: tuple[int, int, int], t2: int, corners2: tuple[int, int, int]):
        """Glue face of ``t`` spanned by ``corners`` to that of ``t2``, positionally."""
        f = 6 - sum(corners)
        f2 = 6 - sum(corners2)
        perm = [0] * 4
        for a, b in zip(corners, corners2):
            perm[a] = b
        perm[f] = f2
        perm = tuple(perm)
        if (t, f) in self.table or (t2, f2) in self.table:
            raise TriangulationError(f"face ({t}, {f}) or ({t2}, {f2}) glued twice")
        if (t, f) == (t2, f2):
            raise TriangulationError(f"face ({t}, {f}) glued to itself")
        self.table[(t, f)] = (t2, f2, perm)
        self.table[(t2, f2)] = (t, f, _perm_inverse(perm))

    def freeze(self) -> Triangulation:
        out: list[Gluing | None] = [None] * (4 * self.count)
        for (t, f), g in self.table.items():
            out[4 * t + f] = g
        return Triangulation(self.count, tuple(out))


@dataclass(frozen=True)
class MarkedTorus:
    """A boundary torus made of two triangles.

    ``lower`` spans (O, O+longitude, O+longitude+fibre) and ``upper`` spans
    (O, O+fibre, O+fibre+longitude), each as (tet, three corners).
    """

    lower: tuple[int, tuple[int, int, int]]
    upper: tuple[int, tuple[int, int, int]]

    @property
    def longitude(self) -> tuple[int, int, int]:
        t, c = self.lower
        return t, c[0], c[1]

    @property
    def fibre(self) -> tuple[int, int, int]:
        t, c = self.upper
        return t, c[0], c[1]

    @property
    def diagonal(self) -> tuple[int, int, int]:
        t, c = self.lower
        return t, c[0], c[2]

    def shifted(self, k: int) -> "MarkedTorus":
        return MarkedTorus((self.lower[0] + k, self.lower[1]), (self.upper[0] + k, self.upper[1]))


@dataclass(frozen=True)
class Piece:
    degree: int
    triangulation: Triangulation
    tori: tuple[MarkedTorus, ...]


# prism over an ordered triangle (0, 1, 2): a_i on the bottom, b_i on top
_PRISM = (
    (("a", 0), ("a", 1), ("a", 2), ("b", 2)),
    (("a", 0), ("a", 1), ("b", 1), ("b", 2)),
    (("a", 0), ("b", 0), ("b", 1), ("b", 2)),
)


def _prism_face(verts) -> tuple[int, tuple[int, int, int]]:
    """(tet in prism, corners) of the unique tet containing ``verts``."""
    for k, tet in enumerate(_PRISM):
        if all(v in tet for v in verts):
            return k, tuple(tet.index(v) for v in verts)
    raise AssertionError(f"no prism tetrahedron spans {verts}")


def _square(i: int, j: int):
    """Two halves of the vertical square over triangle edge (i, j), i < j."""
    return (
        _prism_face((("a", i), ("a", j), ("b", j))),
        _prism_face((("a", i), ("b", i), ("b", j))),
    )


def _polygon(d: int):
    """Sides of the genus-one polygon as (label, forward) pairs."""
    sides = [("a", True), ("b", True), ("a", False), ("b", False)]
    for i in range(d):
        sides += [(("x", i), True), (("c", i), True), (("x", i), False)]
    return sides


def build_piece(d: int) -> Piece:
    """Triangulate P x S^1 with P of genus one and ``d`` boundary circles."""
    if d < 0:
        raise ValueError("degree must be nonnegative")
    sides = _polygon(d)
    L = len(sides)
    b = _Builder()
    base = [b.add(3) for _ in range(L)]

    def glue_square(k, ek, k2, ek2):
        for (t, c), (t2, c2) in zip(_square(*ek), _square(*ek2)):
            b.glue(base[k] + t, c, base[k2] + t2, c2)

    for t in base:
        b.glue(t, (0, 1, 3), t + 1, (0, 1, 3))  # [a0 a1 b2]
        b.glue(t + 1, (0, 2, 3), t + 2, (0, 2, 3))  # [a0 b1 b2]
        b.glue(t, (0, 1, 2), t + 2, (1, 2, 3))  # bottom onto top closes the S^1

    # Triangle k is (centre, tail, head) of side k.  Position of polygon
    # corner p_k and p_{k+1} inside triangle k:
    def pos(k, corner):  # corner 0 = p_k, 1 = p_{k+1}
        forward = sides[k][1]
        return (1 if corner == 0 else 2) if forward else (2 if corner == 0 else 1)

    # spokes: triangle k and k+1 share the spoke to p_{k+1}
    for k in range(L):
        k2 = (k + 1) % L
        glue_square(k, (0, pos(k, 1)), k2, (0, pos(k2, 0)))
    # paired sides
    first: dict = {}
    tori = []
    for k, (label, _) in enumerate(sides):
        if label[0] == "c":
            (t0, c0), (t1, c1) = _square(1, 2)
            tori.append(MarkedTorus((base[k] + t0, c0), (base[k] + t1, c1)))
        elif label in first:
            glue_square(first[label], (1, 2), k, (1, 2))
        else:
            first[label] = k
    return Piece(d, b.freeze(), tuple(tori))


def piece_tet_count(d: int) -> int:
    return PIECE_SLOPE * d + PIECE_OFFSET


def _boundary_slots(g: FiniteGraph) -> list[list[tuple[int, int]]]:
    """Per vertex, its edge endpoints (edge index, side) in canonical order."""
    slots: list[list[tuple[int, int]]] = [[] for _ in range(g.n)]
    for e, ends in enumerate(g.edges):
        for side, v in enumerate(ends):
            slots[v].append((e, side))
    return slots


def glue_tori(b: _Builder, A: MarkedTorus, B: MarkedTorus):
    """Fibre to longitude, longitude to fibre, diagonal to diagonal.

    In corner terms the lower triangle of one side lands on the upper
    triangle of the other, vertex by vertex.
    """
    b.glue(A.lower[0], A.lower[1], B.upper[0], B.upper[1])
    b.glue(A.upper[0], A.upper[1], B.lower[0], B.lower[1])


def build_manifold(g: FiniteGraph) -> Triangulation:
    slots = _boundary_slots(g)
    b = _Builder()
    where: dict[tuple[int, int], MarkedTorus] = {}
    for v in range(g.n):
        piece = build_piece(len(slots[v]))
        off = b.add(piece.triangulation.tet_count)
        t = piece.triangulation
        for tet in range(t.tet_count):
            for f in range(4):
                gl = t.glued(tet, f)
                if gl is not None:
                    b.table[(tet + off, f)] = (gl[0] + off, gl[1], gl[2])
        for slot, torus in zip(slots[v], piece.tori):
            where[slot] = torus.shifted(off)
    for e in range(len(g.edges)):
        glue_tori(b, where[(e, 0)], where[(e, 1)])
    return b.freeze()


# -- invariants ---------------------------------------------------------------


class _DSU:
    def __init__(self, n):
        self.parent = list(range(n))
        self.flip = [0] * n  # parity relative to parent

    def find(self, x):
        root, par = x, 0
        path = []
        while self.parent[root] != root:
            path.append(root)
            root = self.parent[root]
        # compress and fix parities
        acc = 0
        for y in reversed(path):
            acc ^= self.flip[y]
        for y in path:
            p = acc
            acc ^= self.flip[y]
            self.parent[y] = root
            self.flip[y] = p
        return root, (self.flip[x] if path else 0)

    def union(self, x, y, parity=0) -> bool:
        """Join with ``x`` ~ ``y`` up to ``parity``; False on a contradiction."""
        rx, px = self.find(x)
        ry, py = self.find(y)
        if rx == ry:
            return (px ^ py) == parity
        self.parent[rx] = ry
        self.flip[rx] = px ^ py ^ parity
        return True


_EDGES = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
_EDGE_ID = {e: i for i, e in enumerate(_EDGES)}


@dataclass(frozen=True)
class CellStructure:
    vertex: tuple[int, ...]  # (4t + corner) -> class
    edge: tuple[tuple[int, int], ...]  # (6t + local edge) -> (class, sign)
    n_vertices: int
    n_edges: int
    faces: tuple[tuple[int, int], ...]  # representative (tet, face) per class
    reversed_edges: tuple[int, ...]

    def vertex_of(self, tet: int, corner: int) -> int:
        return self.vertex[4 * tet + corner]

    def edge_of(self, tet: int, i: int, j: int) -> tuple[int, int]:
        """(class, +1 or -1) of the edge running from corner i to corner j."""
        cls, sign = self.edge[6 * tet + _EDGE_ID[(min(i, j), max(i, j))]]
        return cls, sign if i < j else -sign


def cell_structure(t: Triangulation) -> CellStructure:
    T = t.tet_count
    vd = _DSU(4 * T)
    ed = _DSU(6 * T)
    bad = set()
    faces = []
    for tet in range(T):
        for f in range(4):
            g = t.glued(tet, f)
            if g is None:
                faces.append((tet, f))
                continue
            t2, f2, p = g
            if (tet, f) <= (t2, f2):
                faces.append((tet, f))
            for i in range(4):
                if i != f:
                    vd.union(4 * tet + i, 4 * t2 + p[i])
            for i, j in _EDGES:
                if f in (i, j):
                    continue
                a, b = p[i], p[j]
                parity = 0 if a < b else 1
                if not ed.union(6 * tet + _EDGE_ID[(i, j)], 6 * t2 + _EDGE_ID[(min(a, b), max(a, b))], parity):
                    bad.add(6 * tet + _EDGE_ID[(i, j)])
    vroots = {}
    vertex = []
    for x in range(4 * T):
        r, _ = vd.find(x)
        vertex.append(vroots.setdefault(r, len(vroots)))
    eroots = {}
    edge = []
    for x in range(6 * T):
        r, par = ed.find(x)
        edge.append((eroots.setdefault(r, len(eroots)), -1 if par else 1))
    rev = tuple(sorted({edge[x][0] for x in bad}))
    return CellStructure(tuple(vertex), tuple(edge), len(vroots), len(eroots), tuple(faces), rev)


def boundary_summary(t: Triangulation) -> tuple[int, int, int]:
    """(vertices, edges, triangles) of the boundary surface."""
    c = cell_structure(t)
    verts, edges, tris = set(), set(), 0
    for tet in range(t.tet_count):
        for f in range(4):
            if t.glued(tet, f) is None:
                tris += 1
                corners = [i for i in range(4) if i != f]
                verts.update(c.vertex_of(tet, i) for i in corners)
                edges.update(c.edge_of(tet, i, j)[0] for i, j in itertools.combinations(corners, 2))
    return len(verts), len(edges), tris


@dataclass(frozen=True)
class TriangulationReport:
    closed: bool
    orientable: bool
    euler: int
    involution: bool
    failures: tuple[str, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.failures


def _check_involution(t: Triangulation) -> list[str]:
    out = []
    for tet in range(t.tet_count):
        for f in range(4):
            g = t.glued(tet, f)
            if g is None:
                continue
            t2, f2, p = g
            if not (0 <= t2 < t.tet_count and 0 <= f2 < 4) or sorted(p) != [0, 1, 2, 3]:
                out.append(f"face ({tet}, {f}): malformed gluing {g}")
                continue
            if (t2, f2) == (tet, f):
                out.append(f"face ({tet}, {f}) glued to itself")
            if p[f] != f2:
                out.append(f"face ({tet}, {f}): permutation does not carry face to face")
            back = t.glued(t2, f2)
            if back is None or back[:2] != (tet, f) or back[2] != _perm_inverse(p):
                out.append(f"face ({tet}, {f}): partner ({t2}, {f2}) does not glue back inversely")
    return out


def _orientation(t: Triangulation) -> list[int] | None:
    """A sign per tet making every gluing orientation-reversing, or None."""
    o = [0] * t.tet_count
    for start in range(t.tet_count):
        if o[start]:
            continue
        o[start] = 1
        stack = [start]
        while stack:
            a = stack.pop()
            for f in range(4):
                g = t.glued(a, f)
                if g is None:
                    continue
                b, _, p = g
                want = -_perm_sign(p) * o[a]
                if o[b] == 0:
                    o[b] = want
                    stack.append(b)
                elif o[b] != want:
                    return None
    return o


def validate(t: Triangulation) -> TriangulationReport:
    failures = _check_involution(t)
    involution = not failures
    if not involution:
        return TriangulationReport(False, False, 0, False, tuple(failures))
    closed = all(g is not None for g in t.gluings)
    orientable = _orientation(t) is not None
    c = cell_structure(t)
    n_faces = len(c.faces)
    euler = c.n_vertices - c.n_edges + n_faces - t.tet_count
    if c.reversed_edges:
        failures.append(f"edge class {c.reversed_edges[0]} is identified with its reverse")
    if not orientable:
        failures.append("no consistent orientation of the tetrahedra")
    return TriangulationReport(closed, orientable, euler, involution, tuple(failures))


@dataclass(frozen=True)
class Homology:
    free_rank: int
    torsion: tuple[int, ...]


def h1(t: Triangulation) -> Homology:
    """First homology with integer coefficients, from the simplicial chains."""
    rep = validate(t)
    if not rep.involution:
        raise TriangulationError(rep.failures[0])
    c = cell_structure(t)
    if c.reversed_edges:
        raise TriangulationError("an edge is identified with its reverse")
    d2: dict[tuple[int, int], int] = {}
    for col, (tet, f) in enumerate(c.faces):
        q, r, s = [i for i in range(4) if i != f]
        for (i, j), coeff in (((r, s), 1), ((q, s), -1), ((q, r), 1)):
            cls, sign = c.edge[6 * tet + _EDGE_ID[(i, j)]]
            d2[(cls, col)] = d2.get((cls, col), 0) + coeff * sign
    d1: dict[tuple[int, int], int] = {}
    seen = set()
    for x, (cls, sign) in enumerate(c.edge):
        if cls in seen:
            continue
        seen.add(cls)
        tet, k = divmod(x, 6)
        i, j = _EDGES[k]
        tail, head = c.vertex[4 * tet + i], c.vertex[4 * tet + j]
        if sign < 0:
            tail, head = head, tail
        if tail != head:
            d1[(tail, cls)] = d1.get((tail, cls), 0) - 1
            d1[(head, cls)] = d1.get((head, cls), 0) + 1
    rank1 = len(smith_diagonal_sparse(d1))
    inv2 = smith_diagonal_sparse(d2)
    free = c.n_edges - rank1 - len(inv2)
    return Homology(free, tuple(x for x in inv2 if x > 1))


def invariants(t: Triangulation) -> tuple[int, int, tuple[int, ...]]:
    h = h1(t)
    return t.tet_count, h.free_rank, h.torsion


# -- text format --------------------------------------------------------------


def to_text(t: Triangulation) -> str:
    lines = [f"tets {t.tet_count}"]
    for tet in range(t.tet_count):
        for f in range(4):
            g = t.glued(tet, f)
            if g is not None:
                t2, f2, p = g
                lines.append(f"{tet} {f} : {t2} {f2} {''.join(map(str, p))}")
    return "\n".join(lines) + "\n"


def from_text(text: str) -> Triangulation:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("tets "):
        raise TriangulationError("missing 'tets <N>' header")
    try:
        n = int(lines[0].split()[1])
    except (IndexError, ValueError):
        raise TriangulationError(f"malformed header {lines[0]!r}") from None
    table: list[Gluing | None] = [None] * (4 * n)
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 6 or parts[2] != ":" or len(parts[5]) != 4:
            raise TriangulationError(f"malformed gluing line {ln!r}")
        try:
            tet, f, t2, f2 = (int(parts[i]) for i in (0, 1, 3, 4))
            p = tuple(int(ch) for ch in parts[5])
        except ValueError:
            raise TriangulationError(f"malformed gluing line {ln!r}") from None
        if not (0 <= tet < n and 0 <= f < 4):
            raise TriangulationError(f"face out of range in {ln!r}")
        if table[4 * tet + f] is not None:
            raise TriangulationError(f"face ({tet}, {f}) listed twice")
        table[4 * tet + f] = (t2, f2, p)
    return Triangulation(n, tuple(table))
