"""Unoriented link diagrams in planar-diagram (PD) form.

A crossing is a 4-tuple of arc ids listed counterclockwise starting at the
incoming under-strand, so slots 0 and 2 are the under-strand and slots 1
and 3 the over-strand.  Components are stored as cycles of arc ids; the
cycle order fixes a reference direction for each component, and an
:class:`Orientation` says per component whether to follow it (+1) or
reverse it (-1).  Components without crossings are free loops and carry an
empty arc cycle.
"""

from __future__ import annotations

import json
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

Slots = tuple[int, int, int, int]


class InvalidDiagram(ValueError):
    pass


@dataclass(frozen=True)
class Layout:
    """Drawing hints: per component, the visible strokes (under-passes cut)."""

    strokes: tuple[tuple[tuple[tuple[float, float], ...], ...], ...]


@dataclass(frozen=True)
class Orientation:
    dirs: tuple[int, ...]

    def __post_init__(self):
        if any(d not in (1, -1) for d in self.dirs):
            raise ValueError("orientation entries must be +1 or -1")

    @classmethod
    def positive(cls, n: int) -> "Orientation":
        return cls((1,) * n)

    def __len__(self):
        return len(self.dirs)

    def __getitem__(self, c: int) -> int:
        return self.dirs[c]

    def flip(self, c: int) -> "Orientation":
        d = list(self.dirs)
        d[c] = -d[c]
        return Orientation(tuple(d))

    def reversed(self) -> "Orientation":
        return Orientation(tuple(-d for d in self.dirs))


@dataclass(frozen=True)
class LinkingMatrix:
    entries: tuple[tuple[int, ...], ...]

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.entries[i][j]

    @property
    def size(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class _Strand:
    under: int  # component ids
    over: int
    sign: int  # with every component in its reference direction
    over_in: int  # slot index (1 or 3) of the incoming over arc


@dataclass(frozen=True)
class LinkDiagram:
    crossings: tuple[Slots, ...]
    components: tuple[tuple[int, ...], ...]
    roles: tuple[str, ...]
    layout: Layout | None = field(default=None, compare=False)

    def __post_init__(self):
        if len(self.roles) != len(self.components):
            raise ValueError("one role per component")

    @property
    def n_components(self) -> int:
        return len(self.components)

    @property
    def free_loops(self) -> int:
        return sum(1 for c in self.components if not c)

    @cached_property
    def arcs(self) -> tuple[int, ...]:
        return tuple(sorted({a for x in self.crossings for a in x}))

    @cached_property
    def component_of(self) -> dict[int, int]:
        return {a: c for c, cyc in enumerate(self.components) for a in cyc}

    def role_components(self, prefix: str) -> list[int]:
        return [c for c, r in enumerate(self.roles) if r.startswith(prefix)]

    @cached_property
    def _successor(self) -> dict[int, int]:
        succ = {}
        for cyc in self.components:
            for k, a in enumerate(cyc):
                succ[a] = cyc[(k + 1) % len(cyc)]
        return succ

    @cached_property
    def strands(self) -> tuple[_Strand, ...]:
        """Per crossing: which components pass under/over and the reference sign."""
        report = validate(self)
        if not report.ok:
            raise InvalidDiagram(report.failures[0])
        over_in, _ = _route(self)
        comp = self.component_of
        out = []
        for x, oi in zip(self.crossings, over_in):
            sign = 1 if oi == 3 else -1
            out.append(_Strand(comp[x[0]], comp[x[1]], sign, oi))
        return tuple(out)


@dataclass
class ValidationReport:
    ok: bool
    failures: list[str]
    faces: int = 0
    pieces: int = 0
    checks: dict[str, bool] = field(default_factory=dict)

    def __str__(self):
        lines = [f"{name}: {'pass' if ok else 'FAIL'}" for name, ok in self.checks.items()]
        lines += [f"  {f}" for f in self.failures]
        return "\n".join(lines)


class _DSU:
    def __init__(self, items: Iterable):
        self.parent = {x: x for x in items}

    def find(self, x):
        p = self.parent
        while p[x] != x:
            p[x] = p[p[x]]
            x = p[x]
        return x

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


_STEPS = ((0, 2), (1, 3), (3, 1))


def _route(d: LinkDiagram) -> tuple[list[int], str | None]:
    """Thread every component through the crossings.

    Consecutive arcs ``a, b`` of a component must be the in and out ends of
    one strand of one crossing, and each slot is used exactly once.  Two arcs
    can meet at two crossings, so the choice is made by backtracking.
    Returns the incoming over slot (1 or 3) per crossing, or a message.
    """
    occ = defaultdict(list)
    for i, x in enumerate(d.crossings):
        for slot, a in enumerate(x):
            occ[a].append((i, slot))
    used: set[tuple[int, int]] = set()
    over_in = [0] * len(d.crossings)
    for c, cyc in enumerate(d.components):
        n = len(cyc)
        if n == 0:
            continue

        def options(k):
            a, b = cyc[k], cyc[(k + 1) % n]
            out = []
            for i, sa in occ[a]:
                for p, q in _STEPS:
                    if p == sa and d.crossings[i][q] == b:
                        out.append((i, p, q))
            return out

        choice: list = []
        stack = [iter(options(0))]
        while stack:
            k = len(stack) - 1
            if len(choice) > k:
                i, p, q = choice.pop()
                used.discard((i, p))
                used.discard((i, q))
            for i, p, q in stack[-1]:
                if (i, p) in used or (i, q) in used:
                    continue
                used.update(((i, p), (i, q)))
                choice.append((i, p, q))
                break
            else:
                stack.pop()
                continue
            if len(choice) == n:
                break
            stack.append(iter(options(len(choice))))
        if len(choice) < n:
            a, b = cyc[len(choice) % n], cyc[(len(choice) + 1) % n]
            return over_in, f"component {c}: no crossing carries arc {a} into arc {b}"
        for i, p, _ in choice:
            if p != 0:
                over_in[i] = p
    if len(used) != 4 * len(d.crossings):
        return over_in, "some crossing strand is not traversed by any component"
    return over_in, None


def validate(d: LinkDiagram) -> ValidationReport:
    """Check the PD invariants; the report lists the first violation per check."""
    rep = ValidationReport(ok=True, failures=[])

    def fail(check, msg):
        rep.checks[check] = False
        rep.failures.append(f"{check}: {msg}")
        rep.ok = False

    # slot arity and arc-end usage
    rep.checks["slots"] = True
    for i, x in enumerate(d.crossings):
        if len(x) != 4:
            fail("slots", f"crossing {i} has {len(x)} slots")
            return rep
    uses = Counter(a for x in d.crossings for a in x)
    bad = next((a for a, k in sorted(uses.items()) if k != 2), None)
    if bad is not None:
        what = "referenced more than twice (duplicate slot reference)" if uses[bad] > 2 else "has a dangling end"
        fail("slots", f"arc {bad} {what}")
        return rep

    rep.checks["components"] = True
    seen: dict[int, int] = {}
    for c, cyc in enumerate(d.components):
        for a in cyc:
            if a in seen:
                fail("components", f"arc {a} listed in components {seen[a]} and {c}")
                return rep
            seen[a] = c
    if set(seen) != set(uses):
        extra = sorted(set(uses) ^ set(seen))
        fail("components", f"arc {extra[0]} not matched between crossings and components")
        return rep

    # strand continuation: consecutive arcs of a component pass through one
    # crossing on one strand, and every strand of every crossing is used once
    rep.checks["continuation"] = True
    _, problem = _route(d)
    if problem:
        fail("continuation", problem)
        return rep

    # faces per connected piece via the slot rotation
    rep.checks["faces"] = True
    where = defaultdict(list)
    for i, x in enumerate(d.crossings):
        for s, a in enumerate(x):
            where[a].append((i, s))
    partner = {}
    for a, (p, q) in where.items():
        partner[p] = q
        partner[q] = p
    dsu = _DSU(range(len(d.crossings)))
    for (i, _), (j, _) in where.values():
        dsu.union(i, j)
    seen_darts = set()
    faces = Counter()
    for i in range(len(d.crossings)):
        for s in range(4):
            if (i, s) in seen_darts:
                continue
            dart = (i, s)
            while dart not in seen_darts:
                seen_darts.add(dart)
                j, t = partner[dart]
                dart = (j, (t + 1) % 4)
            faces[dsu.find(i)] += 1
    sizes = Counter(dsu.find(i) for i in range(len(d.crossings)))
    rep.pieces = len(sizes)
    rep.faces = sum(faces.values())
    for root, v in sorted(sizes.items()):
        if faces[root] != v + 2:
            fail("faces", f"piece at crossing {root}: {v} crossings but {faces[root]} faces")
            break
    return rep


def components(d: LinkDiagram) -> tuple[tuple[int, ...], ...]:
    """Trace strands through crossings and return the component cycles."""
    rep = validate(d)
    if not rep.ok:
        raise InvalidDiagram(rep.failures[0])
    nxt = {}
    for i, x in enumerate(d.crossings):
        st = d.strands[i]
        nxt[x[0]] = x[2]
        nxt[x[st.over_in]] = x[4 - st.over_in]
    cycles = []
    seen = set()
    for a in sorted(nxt):
        if a in seen:
            continue
        cyc = [a]
        seen.add(a)
        b = nxt[a]
        while b != a:
            cyc.append(b)
            seen.add(b)
            b = nxt[b]
        cycles.append(tuple(cyc))
    cycles += [()] * d.free_loops
    return tuple(cycles)


def _check_orientation(d: LinkDiagram, o: Orientation):
    if len(o) != d.n_components:
        raise ValueError(
            f"orientation covers {len(o)} components, diagram has {d.n_components}"
        )


def signed_crossings(d: LinkDiagram, o: Orientation) -> tuple[int, ...]:
    """Crossing signs under ``o``; right-handed crossings are +1."""
    _check_orientation(d, o)
    return tuple(s.sign * o[s.under] * o[s.over] for s in d.strands)


def linking_matrix(d: LinkDiagram, o: Orientation) -> LinkingMatrix:
    _check_orientation(d, o)
    n = d.n_components
    twice = [[0] * n for _ in range(n)]
    for s in d.strands:
        if s.under != s.over:
            e = s.sign * o[s.under] * o[s.over]
            twice[s.under][s.over] += e
            twice[s.over][s.under] += e
    for i in range(n):
        for j in range(n):
            if twice[i][j] % 2:
                raise InvalidDiagram(f"odd crossing-sign sum between components {i} and {j}")
    return LinkingMatrix(tuple(tuple(v // 2 for v in row) for row in twice))


def seifert_circles(d: LinkDiagram) -> int:
    """Number of circles after the oriented smoothing of every crossing."""
    nxt = {}
    for x, s in zip(d.crossings, d.strands):
        over_out = x[4 - s.over_in]
        nxt[x[0]] = over_out
        nxt[x[s.over_in]] = x[2]
    seen = set()
    count = 0
    for a in nxt:
        if a in seen:
            continue
        count += 1
        while a not in seen:
            seen.add(a)
            a = nxt[a]
    return count + d.free_loops


def seifert_genus(d: LinkDiagram) -> int:
    """Genus of the surface produced by Seifert's algorithm on a knot diagram."""
    if d.n_components != 1:
        raise ValueError("Seifert genus is computed for knot diagrams only")
    c = len(d.crossings)
    twice = c - seifert_circles(d) + 1
    return twice // 2


# -- constructions ---------------------------------------------------------


def torus_knot_diagram(q: int) -> LinkDiagram:
    """Closed 2-braid diagram of the (2, q) torus knot, right-handed."""
    if not isinstance(q, int) or q < 3 or q % 2 == 0:
        raise ValueError(f"need an odd integer q >= 3, got {q!r}")
    from .polylink import closed_two_braid, polylines_to_diagram

    curve, _ = closed_two_braid(q)
    return polylines_to_diagram([curve]).diagram


def cable4(k: LinkDiagram) -> LinkDiagram:
    """Blackboard-framed 4-cable of a knot diagram.

    Copy ``i`` runs parallel to the knot on its left at offset ``i``; each
    crossing becomes a 4 x 4 grid of crossings with the knot's sign.
    """
    if k.n_components != 1:
        raise ValueError(f"cable4 needs a knot diagram, got {k.n_components} components")
    if not k.crossings:
        return LinkDiagram((), ((),) * 4, ("plain",) * 4)

    ids: dict[tuple, int] = {}

    def arc(*key):
        return ids.setdefault(key, len(ids))

    crossings: list[Slots] = []
    # per original crossing and copy: arcs met along the under / over copy
    for c, (x, s) in enumerate(zip(k.crossings, k.strands)):
        u_in, u_out = x[0], x[2]
        o_in, o_out = x[s.over_in], x[4 - s.over_in]
        positive = s.sign > 0
        J = [0, 1, 2, 3] if positive else [3, 2, 1, 0]  # over copies met by an under copy
        I = [3, 2, 1, 0] if positive else [0, 1, 2, 3]  # under copies met by an over copy

        def under_arc(i, step):
            if step == 0:
                return arc("ext", u_in, i)
            if step == 4:
                return arc("ext", u_out, i)
            return arc("u", c, i, step)

        def over_arc(j, step):
            if step == 0:
                return arc("ext", o_in, j)
            if step == 4:
                return arc("ext", o_out, j)
            return arc("o", c, j, step)

        for i in range(4):
            for j in range(4):
                su, so = J.index(j), I.index(i)
                ui, uo = under_arc(i, su), under_arc(i, su + 1)
                oi, oo = over_arc(j, so), over_arc(j, so + 1)
                if positive:
                    crossings.append((ui, oo, uo, oi))
                else:
                    crossings.append((ui, oi, uo, oo))

    # components: walk the knot, splicing grid arcs between external ones
    head = {}
    for c, (x, s) in enumerate(zip(k.crossings, k.strands)):
        head[x[0]] = (c, "u")
        head[x[s.over_in]] = (c, "o")
    cyc = k.components[0]
    comps = []
    for i in range(4):
        seq = []
        for a in cyc:
            seq.append(ids[("ext", a, i)])
            c, kind = head[a]
            if kind == "u":
                seq += [ids[("u", c, i, st)] for st in (1, 2, 3)]
            else:
                seq += [ids[("o", c, i, st)] for st in (1, 2, 3)]
        comps.append(tuple(seq))
    return LinkDiagram(tuple(crossings), tuple(comps), ("plain",) * 4)


# -- serialization -----------------------------------------------------------


def to_json(d: LinkDiagram) -> str:
    doc = {
        "crossings": [list(x) for x in d.crossings],
        "free_loops": d.free_loops,
        "components": [list(c) for c in d.components],
        "roles": {str(i): r for i, r in enumerate(d.roles)},
    }
    if d.layout is not None:
        doc["layout"] = [[[list(p) for p in s] for s in comp] for comp in d.layout.strokes]
    return json.dumps(doc, separators=(",", ":")) + "\n"


def from_json(text: str) -> LinkDiagram:
    try:
        doc = json.loads(text)
        crossings = tuple(tuple(int(a) for a in x) for x in doc["crossings"])
        comps = tuple(tuple(int(a) for a in c) for c in doc["components"])
        roles_map = doc["roles"]
        roles = tuple(roles_map[str(i)] for i in range(len(comps)))
        free = int(doc["free_loops"])
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidDiagram(f"malformed diagram file: {exc}") from exc
    if free != sum(1 for c in comps if not c):
        raise InvalidDiagram("free_loops does not match the empty component count")
    layout = None
    if "layout" in doc:
        layout = Layout(
            tuple(
                tuple(tuple((float(p[0]), float(p[1])) for p in s) for s in comp)
                for comp in doc["layout"]
            )
        )
    return LinkDiagram(crossings, comps, roles, layout)


# -- rendering -----------------------------------------------------------------


def render_svg(
    d: LinkDiagram,
    bold: Iterable[int] = (),
    *,
    width: int = 800,
    margin: int = 20,
) -> str:
    """SVG drawing with gaps where a strand passes under another.

    Components listed in ``bold`` are drawn thick and dark; the rest thin
    and grey.  Output depends only on the diagram and arguments.
    """
    if d.layout is None:
        raise ValueError("diagram has no layout data to render")
    bold = set(bold)
    pts = [p for comp in d.layout.strokes for s in comp for p in s]
    if not pts:
        raise ValueError("layout has no strokes")
    xs = [p[0] for p in pts]
    ys = [p[1] for p in pts]
    x0, x1, y0, y1 = min(xs), max(xs), min(ys), max(ys)
    span = max(x1 - x0, y1 - y0, 1e-9)
    k = (width - 2 * margin) / span
    h = int(round((y1 - y0) * k)) + 2 * margin

    def fmt(p):
        return f"{(p[0] - x0) * k + margin:.2f},{(y1 - p[1]) * k + margin:.2f}"

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{h}" '
        f'viewBox="0 0 {width} {h}">',
        f'<rect width="{width}" height="{h}" fill="white"/>',
    ]
    for c, comp in enumerate(d.layout.strokes):
        if c in bold:
            style = 'stroke="black" stroke-width="3"'
        else:
            style = 'stroke="#777" stroke-width="1"'
        out.append(f'<g id="component-{c}" data-role="{d.roles[c]}" fill="none" {style}>')
        for s in comp:
            out.append(f'<polyline points="{" ".join(fmt(p) for p in s)}"/>')
        out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"
