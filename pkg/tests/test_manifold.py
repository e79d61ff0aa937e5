import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hardlink.graphs import FiniteGraph
from hardlink.manifold import (
    PIECE_OFFSET,
    PIECE_SLOPE,
    Homology,
    Triangulation,
    TriangulationError,
    boundary_summary,
    build_manifold,
    build_piece,
    cell_structure,
    from_text,
    h1,
    invariants,
    to_text,
    validate,
)

from helpers import all_simple_graphs


def test_closed_piece_is_three_torus():
    # T^2 x S^1 = T^3, cellular chain complex has zero differentials: H1 = Z^3
    p = build_piece(0)
    rep = validate(p.triangulation)
    assert rep.closed and rep.orientable and rep.euler == 0 and rep.ok
    assert p.tori == ()
    assert h1(p.triangulation) == Homology(3, ())


def test_piece_tet_count_is_affine():
    for d in range(8):
        assert build_piece(d).triangulation.tet_count == PIECE_SLOPE * d + PIECE_OFFSET
    # three tetrahedra per triangle, three triangles per extra boundary circle
    assert PIECE_SLOPE == 3 * 3


@pytest.mark.parametrize("d", [1, 2, 3, 4])
def test_piece_with_boundary(d):
    p = build_piece(d)
    t = p.triangulation
    rep = validate(t)
    assert not rep.closed and rep.orientable and rep.euler == 0 and rep.ok
    assert len(p.tori) == d
    assert t.tet_count <= PIECE_SLOPE * d + PIECE_OFFSET
    # each boundary torus: one vertex, three edges, two triangles
    assert boundary_summary(t) == (d, 3 * d, 2 * d)
    # P has free H1 of rank 1 + d, so H1(P x S^1) = Z^(2 + d)
    assert h1(t) == Homology(2 + d, ())


def test_marked_edges_are_distinct():
    p = build_piece(3)
    c = cell_structure(p.triangulation)
    for torus in p.tori:
        f = c.edge_of(*torus.fibre)[0]
        l = c.edge_of(*torus.longitude)[0]
        g = c.edge_of(*torus.diagonal)[0]
        assert len({f, l, g}) == 3
        # both triangles share the one vertex
        t, corners = torus.lower
        assert len({c.vertex_of(t, i) for i in corners}) == 1


def test_gluing_swaps_fibre_and_longitude():
    g = FiniteGraph(2, ((0, 1),))
    t = build_manifold(g)
    a = build_piece(1).tori[0]
    b = build_piece(1).tori[0].shifted(build_piece(1).triangulation.tet_count)
    c = cell_structure(t)
    assert c.edge_of(*a.fibre) == c.edge_of(*b.longitude)
    assert c.edge_of(*a.longitude) == c.edge_of(*b.fibre)
    assert c.edge_of(*a.diagonal) == c.edge_of(*b.diagonal)
    # the two triangles trade places
    lower_face = 6 - sum(a.lower[1])
    assert t.glued(a.lower[0], lower_face)[0] == b.upper[0]
    upper_face = 6 - sum(a.upper[1])
    assert t.glued(a.upper[0], upper_face)[0] == b.lower[0]


def test_single_edge_manifold():
    t = build_manifold(FiniteGraph(2, ((0, 1),)))
    rep = validate(t)
    assert rep.ok and rep.closed and rep.orientable and rep.euler == 0
    assert t.tet_count == 2 * (PIECE_SLOPE + PIECE_OFFSET)
    # Mayer-Vietoris: Z^3 + Z^3 modulo fibre_1 = longitude_2 = 0 and
    # longitude_1 = fibre_2 = 0 (longitudes bound in the punctured tori)
    assert h1(t) == Homology(4, ())


def test_loop_edge_manifold():
    t = build_manifold(FiniteGraph(1, ((0, 0),)))
    assert validate(t).ok and validate(t).closed
    # self-gluing of P x S^1 (P genus one, two boundary circles l1 + l2 = 0):
    # new generator plus f = l2, l1 = f, so 2 l1 = 0
    assert h1(t) == Homology(3, (2,))


def test_disjoint_union_adds_homology():
    one = h1(build_manifold(FiniteGraph(1)))
    two = h1(build_manifold(FiniteGraph(2)))
    assert two.free_rank == 2 * one.free_rank == 6


def test_mirrored_gluing_breaks_orientability():
    t = build_piece(0).triangulation
    table = list(t.gluings)
    t2, f2, p = table[0]  # tet 0, face 0
    # compose with a reflection of the face (swap corners 1 and 2)
    q = list(p)
    q[1], q[2] = q[2], q[1]
    q = tuple(q)
    inv = [0] * 4
    for i, x in enumerate(q):
        inv[x] = i
    table[0] = (t2, f2, q)
    table[4 * t2 + f2] = (0, 0, tuple(inv))
    rep = validate(Triangulation(t.tet_count, tuple(table)))
    assert rep.involution
    assert not rep.orientable


def test_broken_involution_is_reported():
    t = build_piece(0).triangulation
    table = list(t.gluings)
    t2, f2, p = table[0]
    table[4 * t2 + f2] = (0, 0, p)  # not the inverse permutation in general
    table[1] = None
    rep = validate(Triangulation(t.tet_count, tuple(table)))
    assert not rep.involution and rep.failures
    with pytest.raises(TriangulationError):
        h1(Triangulation(t.tet_count, tuple(table)))


def test_text_round_trip():
    t = build_manifold(FiniteGraph(3, ((0, 1), (1, 2), (2, 0))))
    text = to_text(t)
    assert text.startswith(f"tets {t.tet_count}\n")
    assert from_text(text) == t
    assert to_text(from_text(text)) == text


@pytest.mark.parametrize(
    "text", ["", "tet 3\n", "tets x\n", "tets 1\n0 0 : 0 1\n", "tets 1\n0 0 : 0 1 1023\n0 0 : 0 1 1023\n"]
)
def test_text_errors(text):
    with pytest.raises(TriangulationError):
        from_text(text)


def test_small_graphs_are_closed_orientable():
    for n in range(1, 4):
        for g in all_simple_graphs(n):
            t = build_manifold(g.as_finite())
            rep = validate(t)
            assert rep.ok and rep.closed and rep.orientable and rep.euler == 0


def test_multi_edges_accepted():
    t = build_manifold(FiniteGraph(2, ((0, 1), (0, 1), (1, 1))))
    rep = validate(t)
    assert rep.ok and rep.closed and rep.euler == 0


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 4), st.randoms(use_true_random=False), st.data())
def test_invariants_under_relabeling(n, rnd, data):
    edges = data.draw(
        st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=5)
    )
    g = FiniteGraph(n, tuple(edges))
    t = build_manifold(g)
    perm = list(range(n))
    rnd.shuffle(perm)
    assert invariants(build_manifold(g.relabel(perm))) == invariants(t)
    tets = list(range(t.tet_count))
    rnd.shuffle(tets)
    assert h1(t.relabel(tets)) == h1(t)
    assert validate(t.relabel(tets)) == validate(t)
