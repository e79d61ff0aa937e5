"""Shared fixtures: small instances, graph enumeration, hand-made diagrams."""

from __future__ import annotations

import itertools

from hardlink.diagram import LinkDiagram
from hardlink.graphs import SimpleGraph
from hardlink.polylink import polylines_to_diagram

TTF_INSTANCE = "p i3sat 3 3\n1 -2 3\n1 -1 3\n-1 -2 -3\n"


def all_simple_graphs(n: int):
    pairs = list(itertools.combinations(range(n), 2))
    for mask in range(1 << len(pairs)):
        yield SimpleGraph.from_edges(n, [p for k, p in enumerate(pairs) if mask >> k & 1])


def random_simple_graph(rng, n: int, p: float = 0.5) -> SimpleGraph:
    return SimpleGraph.from_edges(
        n, [e for e in itertools.combinations(range(n), 2) if rng.random() < p]
    )


def complete_graph(n: int) -> SimpleGraph:
    return SimpleGraph.from_edges(n, itertools.combinations(range(n), 2))


def path_graph(n: int) -> SimpleGraph:
    return SimpleGraph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def star_graph(leaves: int) -> SimpleGraph:
    return SimpleGraph.from_edges(leaves + 1, [(0, k) for k in range(1, leaves + 1)])


def hopf(positive: bool = True) -> LinkDiagram:
    """Two overlapping squares; the second dips under, then over, the first."""
    a = [(0, 0, 0), (2, 0, 0), (2, 2, 0), (0, 2, 0)]
    s = 1 if positive else -1
    b = [(1, 1, 0), (3, 1, s), (3, 3, 0), (1, 3, -s)]
    return polylines_to_diagram([a, b]).diagram


# Hand-written PD codes (slots counterclockwise from the incoming under-strand).
# Right-handed trefoil: arcs 0..5 in traversal order, crossings alternate.
TREFOIL = LinkDiagram(
    crossings=((0, 4, 1, 3), (2, 0, 3, 5), (4, 2, 5, 1)),
    components=((0, 1, 2, 3, 4, 5),),
    roles=("plain",),
)
