"""Finite graphs and the plain-text graph format.

The file format is one line holding the vertex count, then one ``u v`` pair
per edge, 1-based.  In memory vertices are 0-based.
"""

from __future__ import annotations

from dataclasses import dataclass


class GraphError(ValueError):
    pass


@dataclass(frozen=True)
class FiniteGraph:
    """Vertices ``0..n-1``; loops and repeated edges are allowed."""

    n: int
    edges: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        if self.n < 0:
            raise GraphError("negative vertex count")
        for u, v in self.edges:
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise GraphError(f"edge ({u + 1}, {v + 1}) has an endpoint outside 1..{self.n}")

    def degree(self, v: int) -> int:
        return sum((a == v) + (b == v) for a, b in self.edges)

    def relabel(self, perm) -> "FiniteGraph":
        """Image under the vertex bijection ``v -> perm[v]``."""
        if sorted(perm) != list(range(self.n)):
            raise GraphError("relabeling is not a permutation of the vertices")
        return FiniteGraph(self.n, tuple((perm[u], perm[v]) for u, v in self.edges))


@dataclass(frozen=True)
class SimpleGraph:
    """No loops, no repeated edges; edges stored as sorted pairs."""

    n: int
    edges: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        if self.n < 0:
            raise GraphError("negative vertex count")
        seen = set()
        for u, v in self.edges:
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise GraphError(f"edge ({u + 1}, {v + 1}) has an endpoint outside 1..{self.n}")
            if u == v:
                raise GraphError(f"loop at vertex {u + 1}")
            if u > v:
                raise GraphError("edges must be stored as (smaller, larger)")
            if (u, v) in seen:
                raise GraphError(f"repeated edge ({u + 1}, {v + 1})")
            seen.add((u, v))
        if list(self.edges) != sorted(self.edges):
            raise GraphError("edges must be sorted")

    @classmethod
    def from_edges(cls, n: int, edges) -> "SimpleGraph":
        return cls(n, tuple(sorted({(min(u, v), max(u, v)) for u, v in edges})))

    def adjacency(self) -> list[set[int]]:
        adj = [set() for _ in range(self.n)]
        for u, v in self.edges:
            adj[u].add(v)
            adj[v].add(u)
        return adj

    def as_finite(self) -> FiniteGraph:
        return FiniteGraph(self.n, self.edges)


def parse_graph(text: str) -> FiniteGraph:
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise GraphError("empty graph file")
    try:
        n = int(lines[0])
    except ValueError:
        raise GraphError(f"first line must be the vertex count, got {lines[0]!r}") from None
    edges = []
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != 2:
            raise GraphError(f"edge line must hold two vertices: {ln!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise GraphError(f"non-integer vertex in {ln!r}") from None
        edges.append((u - 1, v - 1))
    return FiniteGraph(n, tuple(edges))


def format_graph(g: FiniteGraph | SimpleGraph) -> str:
    return "".join([f"{g.n}\n"] + [f"{u + 1} {v + 1}\n" for u, v in g.edges])
