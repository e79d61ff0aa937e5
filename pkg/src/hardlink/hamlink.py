"""Graphs to links of trefoils and unknots.

Vertices sit on a large circle, each drawn as a small right-handed trefoil.
Every edge becomes a thin unknotted loop running along its chord.  At each
end it hooks under-then-over one strand of the endpoint trefoil, which
gives linking number one with that trefoil.  Where two chords cross, the
two loops cross in four points.  The strands of a loop run in opposite
directions, so those four crossings cancel in the linking number.

A Hamiltonian path picks out n trefoils and n - 1 loops that link in a
line, alternating trefoil and loop.  This is a string of trefoils.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .diagram import LinkDiagram, LinkingMatrix, Orientation, linking_matrix
from .graphs import FiniteGraph, SimpleGraph
from .polylink import closed_two_braid, polylines_to_diagram

PATH_GUARD = 10
LOOP_WIDTH = 0.1
TIP_START = 5.0  # distance from a trefoil centre where a loop's clasp begins
UNDER_Z = -10.0


def simplify(g: FiniteGraph) -> SimpleGraph:
    """Drop loops and merge parallel edges."""
    return SimpleGraph.from_edges(g.n, [(u, v) for u, v in g.edges if u != v])


@dataclass(frozen=True)
class ChordLayout:
    angles: tuple[float, ...]
    radius: float
    chords: tuple[tuple[int, int], ...]
    # (i, j, over) for each crossing chord pair i < j; ``over`` passes on top
    crossings: tuple[tuple[int, int, int], ...]

    def position(self, v: int) -> np.ndarray:
        a = self.angles[v]
        return self.radius * np.array([math.cos(a), math.sin(a)])


def _segments_cross(p, q, r, s) -> bool:
    def orient(a, b, c):
        return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])

    d1, d2 = orient(p, q, r), orient(p, q, s)
    d3, d4 = orient(r, s, p), orient(r, s, q)
    return d1 * d2 < 0 and d3 * d4 < 0


def layout(g: SimpleGraph) -> ChordLayout:
    """Vertex k at angle 2 pi k / n + k eps, eps = pi / n^3."""
    n = g.n
    eps = math.pi / n**3 if n else 0.0
    angles = tuple(2 * math.pi * k / n + k * eps for k in range(n))
    radius = max(40.0, 12.0 * n * n)
    lay = ChordLayout(angles, radius, g.edges, ())
    pos = [lay.position(v) for v in range(n)]
    crossings = []
    for i, j in itertools.combinations(range(len(g.edges)), 2):
        (a, b), (c, d) = g.edges[i], g.edges[j]
        if {a, b} & {c, d}:
            continue
        if _segments_cross(pos[a], pos[b], pos[c], pos[d]):
            crossings.append((i, j, i))
    return ChordLayout(angles, radius, g.edges, tuple(crossings))


@dataclass(frozen=True)
class HamLink:
    graph: SimpleGraph
    diagram: LinkDiagram
    layout: ChordLayout

    @property
    def n(self) -> int:
        return self.graph.n

    def edge_component(self, e: int) -> int:
        return self.graph.n + e

    @cached_property
    def linking(self) -> LinkingMatrix:
        return linking_matrix(self.diagram, Orientation.positive(self.diagram.n_components))


def expected_crossings(g: SimpleGraph) -> int:
    return 3 * g.n + 4 * len(g.edges) + 4 * len(layout(g).crossings)


def crossing_bounds(n: int) -> tuple[float, int]:
    """(n^4/2 + 2n^2 + 3n, n^4 + 2)."""
    return n**4 / 2 + 2 * n * n + 3 * n, n**4 + 2


def _trefoil(center: np.ndarray, inward: np.ndarray) -> np.ndarray:
    pts, _ = closed_two_braid(3)
    P = np.array(pts, dtype=float)
    phi = math.atan2(-inward[0], inward[1])
    c, s = math.cos(phi), math.sin(phi)
    rot = np.array([[c, -s], [s, c]])
    P[:, :2] = (P[:, :2] - [1.5, 1.5]) @ rot.T + center
    return P


def _ray_hits(P: np.ndarray, origin: np.ndarray, d: np.ndarray) -> list[float]:
    A = P[:, :2]
    B = np.roll(A, -1, axis=0)
    out = []
    for a, b in zip(A, B):
        e = b - a
        den = d[0] * e[1] - d[1] * e[0]
        if abs(den) < 1e-12:
            continue
        w = a - origin
        t = (w[0] * e[1] - w[1] * e[0]) / den
        u = (w[0] * d[1] - w[1] * d[0]) / den
        if t > 0 and 0 <= u <= 1:
            out.append(t)
    return sorted(out)


def _tip_depth(P, center, d) -> float:
    hits = _ray_hits(P, center, d)
    outer = hits[-1]
    gap = outer - hits[-2] if len(hits) > 1 else outer
    return outer - min(0.3, gap / 2)


def build_link(g: SimpleGraph, *, draw: bool = True) -> HamLink:
    lay = layout(g)
    n, E = g.n, len(g.edges)
    centers = [lay.position(v) for v in range(n)]
    trefoils = []
    for v in range(n):
        inward = -centers[v] / np.linalg.norm(centers[v]) if n > 1 else np.array([0.0, 1.0])
        trefoils.append(_trefoil(centers[v], inward))
    curves = [[tuple(p) for p in T] for T in trefoils]
    half = LOOP_WIDTH / 2
    for idx, (u, v) in enumerate(g.edges):
        h = 10.0 + 2 * (E - idx)
        cu, cv = centers[u], centers[v]
        d = (cv - cu) / np.linalg.norm(cv - cu)
        nrm = np.array([-d[1], d[0]])
        tip_u = _tip_depth(trefoils[u], cu, d)
        tip_v = _tip_depth(trefoils[v], cv, -d)

        def at(c, r, dirn, side, z):
            p = c + r * dirn + side * half * nrm
            return (float(p[0]), float(p[1]), z)

        # strand +1 runs u -> v, strand -1 runs v -> u
        pts = [
            at(cu, TIP_START + 1, d, 1, h),
            at(cv, TIP_START + 1, -d, 1, h),
            at(cv, TIP_START, -d, 1, h),
            at(cv, tip_v, -d, 1, h),  # inbound at v: over
            at(cv, tip_v, -d, -1, UNDER_Z),
            at(cv, TIP_START, -d, -1, UNDER_Z),  # outbound at v: under
            at(cv, TIP_START + 1, -d, -1, h),
            at(cu, TIP_START + 1, d, -1, h),
            at(cu, TIP_START, d, -1, h),
            at(cu, tip_u, d, -1, h),  # inbound at u: over
            at(cu, tip_u, d, 1, UNDER_Z),
            at(cu, TIP_START, d, 1, UNDER_Z),  # outbound at u: under
        ]
        curves.append(pts)
    roles = [f"vertex-trefoil({v + 1})" for v in range(n)]
    roles += [f"edge-loop({u + 1}-{v + 1})" for u, v in g.edges]
    pd = polylines_to_diagram(curves, roles, layout=draw)
    return HamLink(g, pd.diagram, lay)


def verify_incidence_linking(g: SimpleGraph, hl: HamLink) -> tuple[bool, str]:
    """|lk| is 1 exactly on incident (vertex, edge-loop) pairs, 0 elsewhere."""
    lk = hl.linking
    N = hl.diagram.n_components
    for i, j in itertools.combinations(range(N), 2):
        want = 0
        if i < g.n <= j:
            want = int(i in g.edges[j - g.n])
        if abs(lk[i, j]) != want:
            ri, rj = hl.diagram.roles[i], hl.diagram.roles[j]
            return False, f"{ri} and {rj}: |lk| = {abs(lk[i, j])}, expected {want}"
    return True, "ok"


def hamiltonian_bruteforce(g: SimpleGraph) -> tuple[int, ...] | None:
    """Some vertex sequence visiting every vertex once along edges, or None."""
    if g.n > PATH_GUARD:
        raise ValueError(f"n = {g.n} exceeds the enumeration guard {PATH_GUARD}")
    if g.n == 0:
        return None
    adj = g.adjacency()

    def extend(path, seen):
        if len(path) == g.n:
            return tuple(path)
        for w in sorted(adj[path[-1]] - seen):
            found = extend(path + [w], seen | {w})
            if found:
                return found
        return None

    for s in range(g.n):
        found = extend([s], {s})
        if found:
            return found
    return None


def is_hamiltonian_path(g: SimpleGraph, path) -> bool:
    path = tuple(path)
    if len(path) != g.n or sorted(path) != list(range(g.n)):
        return False
    adj = g.adjacency()
    return all(b in adj[a] for a, b in zip(path, path[1:]))


def _edge_index(g: SimpleGraph) -> dict[tuple[int, int], int]:
    return {e: i for i, e in enumerate(g.edges)}


def path_to_sublink(hl: HamLink, path) -> frozenset[int]:
    g = hl.graph
    path = tuple(path)
    if len(path) != g.n or sorted(path) != list(range(g.n)):
        raise ValueError("path must visit every vertex exactly once")
    index = _edge_index(g)
    comps = set(path)
    for a, b in zip(path, path[1:]):
        e = index.get((min(a, b), max(a, b)))
        if e is None:
            raise ValueError(f"vertices {a + 1} and {b + 1} are not adjacent")
        comps.add(hl.edge_component(e))
    return frozenset(comps)


def _string_order(hl: HamLink, subset) -> list[int] | None:
    """Components of ``subset`` in string order, or None if not a string."""
    subset = sorted(set(subset))
    if not subset or len(subset) % 2 == 0:
        return None
    lk = hl.linking
    nbrs = {c: [x for x in subset if x != c and abs(lk[c, x]) == 1] for c in subset}
    if any(len(v) > 2 for v in nbrs.values()):
        return None
    if sum(len(v) for v in nbrs.values()) != 2 * (len(subset) - 1):
        return None
    ends = [c for c in subset if len(nbrs[c]) <= 1]
    start = min(ends)
    order, prev = [start], None
    while len(order) < len(subset):
        nxt = [x for x in nbrs[order[-1]] if x != prev]
        if not nxt:
            return None  # disconnected
        prev = order[-1]
        order.append(nxt[0])
    is_vertex = [c < hl.n for c in order]
    if not all(is_vertex[k] == (k % 2 == 0) for k in range(len(order))):
        return None
    return order


def check_string_of_trefoils(hl: HamLink, subset) -> bool:
    return _string_order(hl, subset) is not None


def decode(hl: HamLink, subset) -> tuple[int, ...] | None:
    """Vertex sequence read off a string of trefoils."""
    order = _string_order(hl, subset)
    if order is None:
        return None
    return tuple(order[::2])


def find_string_sublink(hl: HamLink) -> frozenset[int] | None:
    path = hamiltonian_bruteforce(hl.graph)
    if path is None:
        return None
    return path_to_sublink(hl, path)
