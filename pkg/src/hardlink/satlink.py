"""1-in-3-SAT instances and the link built from them.

Each variable is a disc on the top row, each sentence a knotted solid torus
on the middle row carrying four parallel copies of the (2, 2m+3) torus knot,
and one extra disc sits below.  A band of two parallel strands runs from a
disc to one copy in a sentence gadget; the copy is cut open and spliced
into the disc boundary, so every copy becomes a finger of exactly one disc
component.  Negated literals get one half-twist in their band.

Orientation bookkeeping: a disc component's reference direction is
clockwise around its disc, and each gadget copy has a reference direction
along its companion.  A slot's sign under an orientation says whether the
finger runs along the companion (+1) or against it (-1).  An orientation is
balanced when the four signs in every gadget sum to zero.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .diagram import LinkDiagram, Orientation
from .polylink import closed_two_braid, offset_closed, polylines_to_diagram

BAND_WIDTH = 0.16
COPY_SPACING = 0.05
SOLVE_GUARD = 24
BALANCE_GUARD = 20


class InstanceError(ValueError):
    pass


Literal = tuple[int, bool]  # (variable index 1..n, negated)


@dataclass(frozen=True)
class Instance:
    n: int
    sentences: tuple[tuple[Literal, Literal, Literal], ...]

    def __post_init__(self):
        if self.n < 1:
            raise InstanceError("need at least one variable")
        if not self.sentences:
            raise InstanceError("need at least one sentence")
        for j, s in enumerate(self.sentences, 1):
            if len(s) != 3:
                raise InstanceError(f"sentence {j} has {len(s)} literals, expected 3")
            for v, _ in s:
                if not 1 <= v <= self.n:
                    raise InstanceError(f"sentence {j}: variable {v} out of range 1..{self.n}")

    @property
    def m(self) -> int:
        return len(self.sentences)

    @classmethod
    def from_ints(cls, n: int, rows: Iterable[Iterable[int]]) -> "Instance":
        sentences = []
        for r in rows:
            r = list(r)
            if len(r) != 3:
                raise InstanceError(f"wrong literal count: {len(r)} literals in {r}")
            if 0 in r:
                raise InstanceError("literal 0 is not a variable")
            sentences.append(tuple((abs(x), x < 0) for x in r))
        return cls(n, tuple(sentences))

    def satisfied_by(self, values: tuple[bool, ...]) -> bool:
        return all(
            sum(values[v - 1] != neg for v, neg in s) == 1 for s in self.sentences
        )


def parse_instance(text: str) -> Instance:
    """Read ``p i3sat <n> <m>`` followed by m lines of three signed ints."""
    header = None
    rows = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        if header is None:
            parts = line.split()
            if len(parts) != 4 or parts[:2] != ["p", "i3sat"]:
                raise InstanceError(f"line {lineno}: malformed header {line!r}")
            try:
                header = (int(parts[2]), int(parts[3]))
            except ValueError:
                raise InstanceError(f"line {lineno}: malformed header {line!r}") from None
            continue
        try:
            lits = [int(x) for x in line.split()]
        except ValueError:
            raise InstanceError(f"line {lineno}: non-integer literal in {line!r}") from None
        if len(lits) != 3:
            raise InstanceError(f"line {lineno}: wrong literal count ({len(lits)})")
        rows.append(lits)
    if header is None:
        raise InstanceError("missing header")
    n, m = header
    if len(rows) != m:
        raise InstanceError(f"header declares {m} sentences, found {len(rows)}")
    return Instance.from_ints(n, rows)


def format_instance(ins: Instance) -> str:
    lines = [f"p i3sat {ins.n} {ins.m}"]
    for s in ins.sentences:
        lines.append(" ".join(str(-v if neg else v) for v, neg in s))
    return "\n".join(lines) + "\n"


def solve_bruteforce(ins: Instance) -> set[tuple[bool, ...]]:
    """Every assignment making exactly one literal true in each sentence."""
    if ins.n > SOLVE_GUARD:
        raise ValueError(f"n = {ins.n} exceeds the enumeration guard {SOLVE_GUARD}")
    return {
        vals
        for vals in itertools.product((True, False), repeat=ins.n)
        if ins.satisfied_by(vals)
    }


# -- the link ----------------------------------------------------------------


@dataclass(frozen=True)
class SlotDescriptor:
    source: int  # link component id
    twist: int  # -1 on negated literal bands
    copy: int  # which parallel copy of the companion (0..3)
    arcs: tuple[int, ...]  # arcs of the copy, in companion direction
    passes: tuple[int, ...]  # crossings met along the copy, in companion direction


@dataclass(frozen=True)
class SatLink:
    instance: Instance
    diagram: LinkDiagram
    gadget: tuple[tuple[SlotDescriptor, ...], ...]
    gadget_crossings: tuple[frozenset[int], ...]
    companion_q: int

    @property
    def n(self) -> int:
        return self.instance.n

    @property
    def m(self) -> int:
        return self.instance.m

    @property
    def extra(self) -> int:
        return self.instance.n


def crossing_bound(n: int, m: int) -> int:
    """Upper bound on the crossings of :func:`build_link` output.

    16 per companion crossing in each gadget, at most 12 where bands pass
    over gadget copies and 3 half-twists per sentence, and at most 12 where
    two literal bands meet (their straight pieces cross at most once each).
    Independent of ``n``: variable discs add no crossings.
    """
    q = 2 * m + 3
    bands = 3 * m
    return 16 * m * q + 15 * m + 12 * (bands * (bands - 1) // 2)


def _band_sides(center: list[tuple[float, float]], half: float):
    """Left/right offsets of an open 2D polyline with miter joins."""
    C = np.asarray(center, dtype=float)
    d = np.diff(C, axis=0)
    n = np.stack([-d[:, 1], d[:, 0]], axis=1)
    n /= np.hypot(n[:, 0], n[:, 1])[:, None]
    normals = [n[0]]
    for a, b in zip(n[:-1], n[1:]):
        normals.append((a + b) / (1 + a @ b))
    normals.append(n[-1])
    N = np.array(normals)
    return C + half * N, C - half * N


def build_link(ins: Instance, *, draw: bool = True) -> SatLink:
    """Draw the link for ``ins`` and read off its diagram."""
    n, m = ins.n, ins.m
    q = 2 * m + 3
    w, h2 = BAND_WIDTH, BAND_WIDTH / 2
    top_x = [q + 2 - (q + 4) * (s + 1) / 4 + 0.013 * (s + 1) for s in range(3)]
    bottom_x = -1.03
    # each copy carries only its own cut, so no stray vertex sits under a band
    bases = [closed_two_braid(q, [top_x[k]], [], w) for k in range(3)]
    bases.append(closed_two_braid(q, [], [bottom_x], w))
    pitch = q + 8
    gx = [j * pitch + 2 + 0.0137 * j for j in range(m)]
    shapes = [offset_closed(b, k * COPY_SPACING) for k, (b, _) in enumerate(bases)]
    copies = [
        [[(x + gx[j], y, z) for x, y, z in cp] for cp in shapes] for j in range(m)
    ]

    def copy_path(j, k, backward):
        p = next(iter(bases[k][1].values()))
        cp = copies[j][k]
        N = len(cp)
        if backward:
            idx = [(p - r) % N for r in range(N)]
        else:
            idx = [(p + 1 + r) % N for r in range(N)]
        return [cp[i] for i in idx]

    # literal bands, ranked so that lower (variable, sentence) passes over
    literal = [
        (v, j, s, neg)
        for j, sent in enumerate(ins.sentences)
        for s, (v, neg) in enumerate(sent)
    ]
    order = sorted(literal)
    height = {key: 10.0 + 2 * (len(order) - r) for r, key in enumerate(order)}

    width_total = m * pitch
    fingers: dict[int, list] = {v: [] for v in range(1, n + 1)}
    for v, j, s, neg in literal:
        fingers[v].append((gx[j] + top_x[s], j, s, neg))
    for v in fingers:
        fingers[v].sort()
    disc_w = {v: 0.5 * (len(f) + 1) for v, f in fingers.items()}
    row = sum(disc_w.values()) + n
    span = max(width_total, row)
    x_cursor = (width_total - span) / 2 + 0.021
    gap = (span - sum(disc_w.values())) / n
    y_top = 3.8 + max(8.0, 0.5 * span)

    curves = []
    slots_at: dict[tuple[int, int], tuple] = {}
    for v in range(1, n + 1):
        x0 = x_cursor + gap / 2
        x_cursor += gap + disc_w[v]
        x1 = x0 + disc_w[v]
        pts = [(x0, y_top + 1, 0.0), (x1, y_top + 1, 0.0), (x1, y_top, 0.0)]
        feet = [x0 + 0.5 * (r + 1) + 0.007 * v for r in range(len(fingers[v]))]
        for f, (xc, j, s, neg) in sorted(zip(feet, fingers[v]), reverse=True):
            hgt = height[(v, j, s, neg)]
            y_e = 3.8 + 0.07 * s + 0.011 * j
            center = [(f, y_top), (f, y_top - 0.3), (f, y_top - 0.6), (xc, y_e), (xc, 3.1)]
            right, left = _band_sides(center, h2)
            zr = [0.0, hgt, hgt, hgt, hgt]
            zl = [0.0, hgt, hgt, hgt, hgt]
            if neg:
                right, left = (
                    np.vstack([right[:2], left[2:]]),
                    np.vstack([left[:2], right[2:]]),
                )
                zr[1] = zr[2] = hgt + 0.5
                zl[1] = zl[2] = hgt - 0.5
            path = copy_path(j, s, backward=not neg)
            start = len(pts) + len(right)
            pts += [(x, y, z) for (x, y), z in zip(right, zr)]
            pts += path
            pts += [(x, y, z) for (x, y), z in reversed(list(zip(left, zl)))]
            slots_at[(j, s)] = (v - 1, start, len(path), not neg)
        pts.append((x0, y_top, 0.0))
        curves.append(pts)

    # extra disc below, bands straight up onto copy 3 of every gadget
    y_bot = -3.0
    feet = [gx[j] + bottom_x for j in range(m)]
    ex0, ex1 = min(feet) - 1.0, max(feet) + 1.0
    pts = [(ex0, y_bot - 1, 0.0), (ex0, y_bot, 0.0)]
    for j, f in enumerate(feet):
        hgt = 5.0
        pts += [(f - h2, y_bot, 0.0), (f - h2, -0.1, hgt)]
        path = copy_path(j, 3, backward=True)
        slots_at[(j, 3)] = (n, len(pts), len(path), True)
        pts += path
        pts += [(f + h2, -0.1, hgt), (f + h2, y_bot, 0.0)]
    pts += [(ex1, y_bot, 0.0), (ex1, y_bot - 1, 0.0)]
    curves.append(pts)

    roles = [f"variable-disc({v})" for v in range(1, n + 1)] + ["extra-disc"]
    pd = polylines_to_diagram(curves, roles, layout=draw)
    d = pd.diagram

    gadget = []
    gadget_x = []
    for j, sent in enumerate(ins.sentences):
        slots = []
        segs = {}
        for s in range(4):
            c, start, length, along = slots_at[(j, s)]
            inside = [e for e in pd.events[c] if start <= e.seg < start + length - 1]
            arcs = tuple(e.arc_out for e in inside[:-1])
            passes = tuple(e.crossing for e in inside)
            if not along:
                arcs, passes = arcs[::-1], passes[::-1]
            if s < 3:
                twist = -1 if sent[s][1] else 1
            else:
                twist = 1
            slots.append(SlotDescriptor(c, twist, s, arcs, passes))
            segs[s] = (c, start, length)
        # crossings where two gadget copies of this sentence meet
        count: dict[int, int] = {}
        for c, start, length in segs.values():
            for e in pd.events[c]:
                if start <= e.seg < start + length - 1:
                    count[e.crossing] = count.get(e.crossing, 0) + 1
        gadget_x.append(frozenset(x for x, k in count.items() if k == 2))
        gadget.append(tuple(slots))
    return SatLink(ins, d, tuple(gadget), tuple(gadget_x), q)


# -- orientations --------------------------------------------------------------


def _check(sl: SatLink, o: Orientation):
    if len(o) != sl.n + 1:
        raise ValueError(f"orientation has {len(o)} entries, link has {sl.n + 1} components")


def slot_signs(sl: SatLink, o: Orientation) -> tuple[tuple[int, int, int, int], ...]:
    """Per sentence, the sign of each slot: dir(source component) * twist."""
    _check(sl, o)
    return tuple(tuple(o[s.source] * s.twist for s in g) for g in sl.gadget)


def traced_slot_signs(sl: SatLink, o: Orientation) -> tuple[tuple[int, ...], ...]:
    """Slot signs read from the diagram: does the oriented component run
    through the copy's arcs in companion order?"""
    _check(sl, o)
    succ = sl.diagram._successor
    out = []
    for g in sl.gadget:
        signs = []
        for s in g:
            a0, a1 = s.arcs[0], s.arcs[1]
            along = 1 if succ[a0] == a1 else -1
            signs.append(along * o[s.source])
        out.append(tuple(signs))
    return tuple(out)


def gadget_winding(sl: SatLink, o: Orientation) -> tuple[int, ...]:
    """Algebraic winding of the link around each sentence solid torus."""
    return tuple(sum(g) for g in traced_slot_signs(sl, o))


def is_balanced(sl: SatLink, o: Orientation) -> bool:
    return all(sum(g) == 0 for g in slot_signs(sl, o))


def encode(sl: SatLink, a: tuple[bool, ...]) -> Orientation:
    if len(a) != sl.n:
        raise ValueError(f"assignment has length {len(a)}, expected {sl.n}")
    return Orientation(tuple(1 if x else -1 for x in a) + (1,))


def decode(sl: SatLink, o: Orientation) -> tuple[bool, ...]:
    _check(sl, o)
    if o[sl.extra] < 0:
        o = o.reversed()
    return tuple(o[i] == 1 for i in range(sl.n))


def balanced_bruteforce(sl: SatLink) -> set[Orientation]:
    if sl.n > BALANCE_GUARD:
        raise ValueError(f"n = {sl.n} exceeds the enumeration guard {BALANCE_GUARD}")
    found = set()
    for dirs in itertools.product((1, -1), repeat=sl.n + 1):
        o = Orientation(dirs)
        if is_balanced(sl, o):
            found.add(o)
    return found


def seifert_stats(sl: SatLink, a: tuple[bool, ...]) -> tuple[int, int]:
    """(Euler characteristic, complexity bound) of the disc-annulus-band surface.

    n+1 discs and 2m annuli joined by 4m bands: chi = (n+1) + 0 - 4m.
    """
    if not sl.instance.satisfied_by(tuple(a)):
        raise ValueError("assignment does not solve the instance")
    n, m = sl.n, sl.m
    discs, annuli, bands = n + 1, 2 * m, 4 * m
    euler = discs * 1 + annuli * 0 - bands
    return euler, 4 * m


def companion_signs(sl: SatLink) -> tuple[tuple[int, ...], ...]:
    """Signs of each gadget's internal crossings with all four copies run in
    companion direction; a faithful cable of a positive knot gives all +1."""
    d = sl.diagram
    succ = d._successor
    along = {}
    for g in sl.gadget:
        for s in g:
            forward = 1 if succ[s.arcs[0]] == s.arcs[1] else -1
            for a in s.arcs:
                along[a] = forward
    out = []
    for xs in sl.gadget_crossings:
        signs = []
        for x in sorted(xs):
            slots = d.crossings[x]
            st = d.strands[x]
            u = along.get(slots[0], along.get(slots[2]))
            v = along.get(slots[1], along.get(slots[3]))
            signs.append(st.sign * u * v)
        out.append(tuple(signs))
    return tuple(out)
