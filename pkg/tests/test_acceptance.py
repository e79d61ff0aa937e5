"""Acceptance checks, one test per criterion.

Each test prints ``criterion N: PASS|FAIL <detail>``; the lines are repeated
in the terminal summary by ``conftest.py``.
"""

from __future__ import annotations

import itertools
import random
import time

from hardlink import diagram as dg
from hardlink import hamlink, manifold, satlink
from hardlink.graphs import FiniteGraph
from hardlink.intmat import IntMatrix, determinant, smith_diagonal, smith_diagonal_sparse, snf

from helpers import TTF_INSTANCE, all_simple_graphs, complete_graph, random_simple_graph

SEED = 20240229


def _sample_graphs():
    """All simple graphs on at most 4 vertices, then 300 random ones on at most 7."""
    graphs = [g for n in range(1, 5) for g in all_simple_graphs(n)]
    rng = random.Random(SEED)
    graphs += [random_simple_graph(rng, rng.randint(1, 7), rng.random()) for _ in range(300)]
    return graphs


def _random_multigraph(rng, max_n=5):
    n = rng.randint(1, max_n)
    edges = tuple((rng.randrange(n), rng.randrange(n)) for _ in range(rng.randint(0, n + 3)))
    return FiniteGraph(n, edges)


def _instances_up_to_order(max_n, max_m):
    """Instances with n <= max_n, m <= max_m, one per multiset of sentences,
    each sentence a multiset of literals."""
    for n in range(1, max_n + 1):
        lits = [v for k in range(1, n + 1) for v in (k, -k)]
        sentences = list(itertools.combinations_with_replacement(lits, 3))
        for m in range(1, max_m + 1):
            for rows in itertools.combinations_with_replacement(sentences, m):
                yield satlink.Instance.from_ints(n, rows)


def _random_instance(rng, max_n, max_m):
    n, m = rng.randint(1, max_n), rng.randint(1, max_m)
    rows = [[rng.choice((1, -1)) * rng.randint(1, n) for _ in range(3)] for _ in range(m)]
    return satlink.Instance.from_ints(n, rows)


def _sat_problems(sl, sols):
    """Mismatches between balanced orientations and solutions, checked both
    from slot data and from the traced diagram."""
    problems = []
    expected = {satlink.encode(sl, a) for a in sols}
    expected |= {o.reversed() for o in expected}
    balanced = set()
    for dirs in itertools.product((1, -1), repeat=sl.n + 1):
        o = dg.Orientation(dirs)
        if satlink.slot_signs(sl, o) != satlink.traced_slot_signs(sl, o):
            problems.append(f"slot signs disagree with the diagram at {dirs}")
            break
        if satlink.is_balanced(sl, o):
            balanced.add(o)
    if balanced != expected:
        problems.append(f"{len(balanced)} balanced orientations for {len(sols)} solutions")
    for a in sols:
        if satlink.decode(sl, satlink.encode(sl, a)) != a:
            problems.append("decode(encode(a)) != a")
    return problems


# -- 1 -------------------------------------------------------------------------


def test_criterion_1_sample_instance_end_to_end(criterion):
    start = time.perf_counter()
    ins = satlink.parse_instance(TTF_INSTANCE)
    sols = satlink.solve_bruteforce(ins)
    sl = satlink.build_link(ins)
    rep = dg.validate(sl.diagram)
    balanced = satlink.balanced_bruteforce(sl)
    decoded = {satlink.decode(sl, o) for o in balanced}
    stats = satlink.seifert_stats(sl, (True, True, False))
    elapsed = time.perf_counter() - start

    checks = {
        "one solution TTF": sols == {(True, True, False)},
        "valid diagram": rep.ok,
        "4 components": sl.diagram.n_components == 4,
        "three (2,9) gadgets": sl.companion_q == 9 and len(sl.gadget) == 3,
        "gadget crossings positive": all(
            all(s == 1 for s in signs) for signs in satlink.companion_signs(sl)
        ),
        "2 balanced orientations": len(balanced) == 2,
        "both decode to TTF": decoded == {(True, True, False)},
        "surface stats (-8, 12)": stats == (-8, 12),
        "under 1 s": elapsed < 1.0,
    }
    bad = [k for k, v in checks.items() if not v]
    ok = criterion(1, not bad, f"TTF instance in {elapsed:.3f}s" + (f"; failed: {bad}" if bad else ""))
    assert ok, bad


# -- 2 -------------------------------------------------------------------------


def test_criterion_2_balanced_orientations_are_solutions(criterion):
    start = time.perf_counter()
    corpus = list(_instances_up_to_order(3, 2))
    exhaustive = len(corpus)
    rng = random.Random(SEED)
    corpus += [_random_instance(rng, 4, 4) for _ in range(200)]
    failures = []
    for ins in corpus:
        sl = satlink.build_link(ins, draw=False)
        for p in _sat_problems(sl, satlink.solve_bruteforce(ins)):
            failures.append(f"{ins.sentences}: {p}")
    elapsed = time.perf_counter() - start
    ok = not failures and elapsed < 120
    criterion(
        2,
        ok,
        f"{exhaustive} exhaustive + 200 random instances in {elapsed:.1f}s"
        + (f"; {failures[:3]}" if failures else ""),
    )
    assert ok, failures[:5]


# -- 3 -------------------------------------------------------------------------


def test_criterion_3_companion_complexity(criterion):
    seen = []
    for m in range(1, 6):
        q = 2 * m + 3
        g = dg.seifert_genus(dg.torus_knot_diagram(q))
        seen.append((m, 2 * g - 1))
    ok = all(chi == 2 * m + 1 for m, chi in seen)
    criterion(3, ok, "chi_- of T(2,2m+3) for m=1..5: " + ", ".join(f"{c}" for _, c in seen))
    assert ok, seen


# -- 4 and 5 -------------------------------------------------------------------

_BUILT: dict = {}


def _sample_links():
    if "links" not in _BUILT:
        _BUILT["links"] = [(g, hamlink.build_link(g, draw=False)) for g in _sample_graphs()]
    return _BUILT["links"]


def test_criterion_4_hamlink_crossing_bounds(criterion):
    failures = []
    worst = 0.0
    for g, hl in _sample_links():
        c = len(hl.diagram.crossings)
        loose, tight = hamlink.crossing_bounds(g.n)
        if c != hamlink.expected_crossings(g):
            failures.append(f"{g}: {c} crossings, expected {hamlink.expected_crossings(g)}")
        if c > tight or (g.n >= 3 and c > loose):
            failures.append(f"{g}: {c} crossings exceed the bound")
        worst = max(worst, c / tight)
    ok = not failures
    criterion(4, ok, f"{len(_sample_links())} graphs, max crossings / (n^4+2) = {worst:.3f}"
              + (f"; {failures[:3]}" if failures else ""))
    assert ok, failures[:5]


def test_criterion_5_linking_matches_incidence(criterion):
    failures = []
    for g, hl in _sample_links():
        good, msg = hamlink.verify_incidence_linking(g, hl)
        if not good:
            failures.append(f"{g}: {msg}")
    ok = not failures
    criterion(5, ok, f"{len(_sample_links())} graphs, |lk| = incidence"
              + (f"; {failures[:3]}" if failures else ""))
    assert ok, failures[:5]


# -- 6 -------------------------------------------------------------------------


def _hamiltonian_paths(g):
    return [p for p in itertools.permutations(range(g.n)) if hamlink.is_hamiltonian_path(g, p)]


def test_criterion_6_strings_are_hamiltonian_paths(criterion):
    start = time.perf_counter()
    graphs = [g for n in range(1, 6) for g in all_simple_graphs(n)]
    rng = random.Random(SEED + 6)
    graphs += [random_simple_graph(rng, 6, rng.random()) for _ in range(100)]
    failures, enumerated = [], 0
    for g in graphs:
        hl = hamlink.build_link(g, draw=False)
        path = hamlink.hamiltonian_bruteforce(g)
        sub = hamlink.find_string_sublink(hl)
        if (path is None) != (sub is None):
            failures.append(f"{g}: path {path} but sublink {sub}")
            continue
        if sub is not None:
            seq = hamlink.decode(hl, sub)
            if len(sub) != 2 * g.n - 1 or seq is None or not hamlink.is_hamiltonian_path(g, seq):
                failures.append(f"{g}: sublink {sorted(sub)} is not a string along a path")
        if g.n <= 4:
            enumerated += 1
            strings = {
                frozenset(s)
                for s in itertools.combinations(range(hl.diagram.n_components), 2 * g.n - 1)
                if hamlink.check_string_of_trefoils(hl, s)
            }
            wanted = {hamlink.path_to_sublink(hl, p) for p in _hamiltonian_paths(g)}
            if strings != wanted:
                failures.append(f"{g}: {len(strings)} string sublinks, {len(wanted)} path sublinks")
    elapsed = time.perf_counter() - start
    ok = not failures and elapsed < 300
    criterion(
        6,
        ok,
        f"{len(graphs)} graphs ({enumerated} with full subset enumeration) in {elapsed:.1f}s"
        + (f"; {failures[:3]}" if failures else ""),
    )
    assert ok, failures[:5]


# -- 7 -------------------------------------------------------------------------


def test_criterion_7_manifolds_are_closed_orientable(criterion):
    rng = random.Random(SEED + 7)
    failures = []
    tets = 0
    for _ in range(200):
        g = _random_multigraph(rng)
        t = manifold.build_manifold(g)
        rep = manifold.validate(t)
        tets = max(tets, t.tet_count)
        if not (rep.ok and rep.closed and rep.orientable and rep.involution and rep.euler == 0):
            failures.append(f"{g}: {rep}")
    ok = not failures
    criterion(7, ok, f"200 graphs, largest {tets} tetrahedra" + (f"; {failures[:2]}" if failures else ""))
    assert ok, failures[:3]


# -- 8 -------------------------------------------------------------------------


def test_criterion_8_invariants_ignore_labels(criterion):
    rng = random.Random(SEED + 8)
    failures = []
    for _ in range(50):
        g = _random_multigraph(rng)
        base = manifold.invariants(manifold.build_manifold(g))
        for _ in range(10):
            perm = list(range(g.n))
            rng.shuffle(perm)
            edges = list(g.relabel(perm).edges)
            rng.shuffle(edges)
            edges = [(v, u) if rng.random() < 0.5 else (u, v) for u, v in edges]
            other = manifold.invariants(manifold.build_manifold(FiniteGraph(g.n, tuple(edges))))
            if other != base:
                failures.append(f"{g} under {perm}: {base} vs {other}")
    ok = not failures
    criterion(8, ok, "50 graphs x 10 relabelings, (tets, H1) unchanged"
              + (f"; {failures[:2]}" if failures else ""))
    assert ok, failures[:3]


# -- 9 -------------------------------------------------------------------------


def _snf_problem(rows):
    M = IntMatrix.from_rows(rows, len(rows[0]))
    f = snf(M)
    if (f.U @ M @ f.V) != f.matrix(M.rows, M.cols):
        return "U M V is not the diagonal form"
    if abs(determinant(f.U)) != 1 or abs(determinant(f.V)) != 1:
        return "transform is not unimodular"
    d = list(f.diagonal)
    if any(x < 0 for x in d):
        return "negative diagonal entry"
    nz = [x for x in d if x]
    if d[: len(nz)] != nz or any(b % a for a, b in zip(nz, nz[1:])):
        return "diagonal is not a divisor chain"
    if smith_diagonal(M) != nz:
        return "smith_diagonal differs from snf"
    sparse = {(i, j): v for i, r in enumerate(rows) for j, v in enumerate(r) if v}
    if smith_diagonal_sparse(sparse) != nz:
        return "sparse elimination differs"
    if M.rows == M.cols:
        prod = 1
        for x in d:
            prod *= x
        if prod != abs(determinant(M)):
            return "product of the diagonal is not |det|"
    return None


def test_criterion_9_homology_oracle(criterion):
    start = time.perf_counter()
    h = manifold.h1(manifold.build_manifold(FiniteGraph(1)))
    base_ok = (h.free_rank, h.torsion) == (3, ())
    rng = random.Random(SEED + 9)
    failures = []
    for _ in range(1000):
        r, c = rng.randint(1, 8), rng.randint(1, 8)
        density = rng.random()
        rows = [[rng.randint(-9, 9) if rng.random() < density else 0 for _ in range(c)] for _ in range(r)]
        problem = _snf_problem(rows)
        if problem:
            failures.append(f"{rows}: {problem}")
    elapsed = time.perf_counter() - start
    ok = base_ok and not failures and elapsed < 60
    criterion(
        9,
        ok,
        f"H1(T^2 x S^1) = Z^{h.free_rank}{' + torsion ' + str(h.torsion) if h.torsion else ''}, "
        f"1000 random SNFs in {elapsed:.1f}s" + (f"; {failures[:2]}" if failures else ""),
    )
    assert ok, failures[:3]


# -- 10 ------------------------------------------------------------------------


def test_criterion_10_diagram_kernel(criterion):
    rng = random.Random(SEED + 10)
    diagrams = [satlink.build_link(satlink.parse_instance(TTF_INSTANCE)).diagram]
    diagrams += [satlink.build_link(_random_instance(rng, 4, 3)).diagram for _ in range(20)]
    diagrams += [hamlink.build_link(g).diagram for n in range(1, 5) for g in all_simple_graphs(n)]
    diagrams += [hamlink.build_link(complete_graph(n)).diagram for n in (5, 6)]
    for q in range(3, 14, 2):
        k = dg.torus_knot_diagram(q)
        diagrams += [k, dg.cable4(k)]
    failures = []
    for d in diagrams:
        rep = dg.validate(d)
        if not rep.ok:
            failures.append(f"{d.roles[:2]}: {rep.failures}")
            continue
        text = dg.to_json(d)
        back = dg.from_json(text)
        if back != d or dg.to_json(back) != text:
            failures.append(f"{d.roles[:2]}: JSON round trip differs")
    tris = 0
    for _ in range(50):
        t = manifold.build_manifold(_random_multigraph(rng))
        text = manifold.to_text(t)
        back = manifold.from_text(text)
        tris += 1
        if back != t or manifold.to_text(back) != text:
            failures.append("triangulation text round trip differs")
    ok = not failures
    criterion(
        10,
        ok,
        f"face law on {len(diagrams)} diagrams, byte-exact JSON and {tris} triangulation round trips"
        + (f"; {failures[:2]}" if failures else ""),
    )
    assert ok, failures[:3]
