"""Planar diagrams from closed polygonal curves in R^3.

Every construction in this package is drawn as a set of closed polylines
with a height coordinate.  Projecting to the plane and comparing heights at
each transverse double point gives the crossing information, so the PD code
is read off a genuine space curve rather than assembled by hand.

The projection must be generic: no double point may sit at a vertex, no two
segments may overlap, no three segments may pass through one point and the
two heights at a double point must differ.  Violations raise
:class:`DegenerateProjection` rather than being perturbed away.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .diagram import Layout, LinkDiagram

EPS_T = 1e-9
EPS_Z = 1e-9


class DegenerateProjection(ValueError):
    pass


@dataclass(frozen=True)
class Event:
    """One passage of a component through a crossing."""

    seg: int
    t: float
    crossing: int
    over: bool
    arc_out: int


@dataclass(frozen=True)
class PolyDiagram:
    diagram: LinkDiagram
    events: tuple[tuple[Event, ...], ...]


def _segments(curves):
    starts, ends, zs, owner, offsets = [], [], [], [], []
    for c, pts in enumerate(curves):
        offsets.append(len(owner))
        P = np.asarray(pts, dtype=float)
        if P.ndim != 2 or P.shape[1] != 3 or len(P) < 3:
            raise ValueError(f"component {c}: need at least 3 vertices of (x, y, z)")
        Q = np.roll(P, -1, axis=0)
        starts.append(P[:, :2])
        ends.append(Q[:, :2])
        zs.append(np.stack([P[:, 2], Q[:, 2]], axis=1))
        owner.extend((c, k, len(P)) for k in range(len(P)))
    return np.concatenate(starts), np.concatenate(ends), np.concatenate(zs), owner, offsets


def _intersections(A, B, owner, block=512):
    """All transverse double points as (i, j, t_i, t_j) with i < j."""
    D = B - A
    lo = np.minimum(A, B)
    hi = np.maximum(A, B)
    lengths = np.hypot(D[:, 0], D[:, 1])
    if np.any(lengths < 1e-12):
        raise DegenerateProjection("zero-length segment in projection")
    scale = max(1.0, float(np.abs(np.concatenate([A, B])).max()))
    comp = np.array([o[0] for o in owner])
    idx = np.array([o[1] for o in owner])
    size = np.array([o[2] for o in owner])
    nxt = np.where(idx + 1 == size, idx + 1 - size, idx + 1)
    S = len(A)
    found = []
    for start in range(0, S, block):
        I = np.arange(start, min(S, start + block))
        box = (
            (lo[None, :, 0] <= hi[I, None, 0] + 1e-12)
            & (hi[None, :, 0] >= lo[I, None, 0] - 1e-12)
            & (lo[None, :, 1] <= hi[I, None, 1] + 1e-12)
            & (hi[None, :, 1] >= lo[I, None, 1] - 1e-12)
        )
        box &= np.arange(S)[None, :] > I[:, None]
        same = comp[None, :] == comp[I, None]
        adjacent = same & ((idx[None, :] == nxt[I, None]) | (nxt[None, :] == idx[I, None]))
        ii, jj = np.nonzero(box & ~adjacent)
        if not len(ii):
            continue
        ii = I[ii]
        r, s_ = D[ii], D[jj]
        qp = A[jj] - A[ii]
        den = r[:, 0] * s_[:, 1] - r[:, 1] * s_[:, 0]
        tn = qp[:, 0] * s_[:, 1] - qp[:, 1] * s_[:, 0]
        un = qp[:, 0] * r[:, 1] - qp[:, 1] * r[:, 0]
        par = np.abs(den) <= 1e-12 * lengths[ii] * lengths[jj]
        for i, j in zip(ii[par], jj[par]):
            # parallel: only an error if collinear and overlapping
            off = A[j] - A[i]
            if abs(off[0] * D[i, 1] - off[1] * D[i, 0]) <= 1e-9 * scale * lengths[i]:
                pa = np.dot(A[j] - A[i], D[i]) / lengths[i] ** 2
                pb = np.dot(B[j] - A[i], D[i]) / lengths[i] ** 2
                if max(pa, pb) > -EPS_T and min(pa, pb) < 1 + EPS_T:
                    raise DegenerateProjection(f"overlapping segments {i} and {j}")
        ok = ~par
        safe = np.where(ok, den, 1.0)
        t = np.where(ok, tn / safe, -1.0)
        u = np.where(ok, un / safe, -1.0)
        hit = ok & (t > -EPS_T) & (t < 1 + EPS_T) & (u > -EPS_T) & (u < 1 + EPS_T)
        inner = hit & (t > EPS_T) & (t < 1 - EPS_T) & (u > EPS_T) & (u < 1 - EPS_T)
        if np.any(hit & ~inner):
            k = np.flatnonzero(hit & ~inner)[0]
            raise DegenerateProjection(f"segments {ii[k]} and {jj[k]} meet at a vertex")
        for k in np.flatnonzero(inner):
            found.append((int(ii[k]), int(jj[k]), float(t[k]), float(u[k])))
    found.sort()
    return found


def _stroke_points(P, cuts, gap):
    """Split closed polyline P (n x 2) at arclength positions ``cuts``."""
    Q = np.vstack([P, P[:1]])
    seglen = np.hypot(*(Q[1:] - Q[:-1]).T)
    cum = np.concatenate([[0.0], np.cumsum(seglen)])
    total = cum[-1]
    n = len(P)
    # three laps of vertex positions, so any window of length < total fits
    laps = np.concatenate([cum[:-1] + k * total for k in range(3)])
    verts = np.vstack([P, P, P])

    def point_at(s):
        s %= total
        k = min(int(np.searchsorted(cum, s, side="right") - 1), n - 1)
        f = (s - cum[k]) / seglen[k] if seglen[k] else 0.0
        return Q[k] + f * (Q[k + 1] - Q[k])

    if not cuts:
        return [[tuple(p) for p in P] + [tuple(P[0])]]
    cuts = sorted(cuts)
    out = []
    for a, b in zip(cuts, cuts[1:] + [cuts[0] + total]):
        g = min(gap, 0.3 * (b - a))
        s0, s1 = a + g, b - g
        lo = np.searchsorted(laps, s0, side="right")
        hi = np.searchsorted(laps, s1, side="left")
        pts = [point_at(s0), *verts[lo:hi], point_at(s1)]
        out.append([tuple(p) for p in pts])
    return out


def polylines_to_diagram(
    curves: Sequence[Sequence[Sequence[float]]],
    roles: Sequence[str] | None = None,
    *,
    gap: float = 0.12,
    layout: bool = True,
) -> PolyDiagram:
    """Project closed space polylines and return their PD diagram.

    Component ``c`` of the result is ``curves[c]``, canonically oriented in
    vertex order.  Crossing slots are listed counterclockwise from the
    incoming under-strand.  ``layout=False`` skips the drawing strokes,
    which only rendering needs.
    """
    if roles is None:
        roles = ["plain"] * len(curves)
    if len(roles) != len(curves):
        raise ValueError("one role per curve")
    A, B, Z, owner, offsets = _segments(curves)
    hits = _intersections(A, B, owner)

    pts = np.array([A[i] + t * (B[i] - A[i]) for i, _, t, _ in hits]).reshape(-1, 2)
    if len(pts) > 1:
        order = np.lexsort((pts[:, 1], pts[:, 0]))
        sp = pts[order]
        close = np.all(np.abs(np.diff(sp, axis=0)) < 1e-9, axis=1)
        if np.any(close):
            raise DegenerateProjection("three strands through one point")

    # per-component passages: (seg, t, hit index, over?)
    passes: list[list] = [[] for _ in curves]
    for h, (i, j, t, u) in enumerate(hits):
        zi = Z[i, 0] + t * (Z[i, 1] - Z[i, 0])
        zj = Z[j, 0] + u * (Z[j, 1] - Z[j, 0])
        if abs(zi - zj) <= EPS_Z:
            raise DegenerateProjection(f"equal heights at double point of segments {i}, {j}")
        ci, ki, _ = owner[i]
        cj, kj, _ = owner[j]
        passes[ci].append((ki, t, h, zi > zj))
        passes[cj].append((kj, u, h, zj > zi))
    for p in passes:
        p.sort()

    # crossings numbered by first passage in component order
    number: dict[int, int] = {}
    for p in passes:
        for _, _, h, _ in p:
            number.setdefault(h, len(number))

    arc_base = []
    nxt = 0
    for p in passes:
        arc_base.append(nxt)
        nxt += len(p)

    slot_in = {}  # (crossing, over?) -> (arc_in, arc_out, direction)
    events = []
    components = []
    for c, p in enumerate(passes):
        k = len(p)
        arcs = tuple(arc_base[c] + r for r in range(k))
        components.append(arcs)
        ev = []
        for r, (seg, t, h, over) in enumerate(p):
            x = number[h]
            a_in = arc_base[c] + (r - 1) % k
            a_out = arc_base[c] + r
            d = B[offsets[c] + seg] - A[offsets[c] + seg]
            slot_in[(x, over)] = (a_in, a_out, d)
            ev.append(Event(seg, t, x, over, a_out))
        events.append(tuple(ev))

    crossings = []
    for x in range(len(number)):
        ui, uo, u = slot_in[(x, False)]
        oi, oo, v = slot_in[(x, True)]
        if v[0] * u[1] - v[1] * u[0] > 0:  # right-handed
            crossings.append((ui, oo, uo, oi))
        else:
            crossings.append((ui, oi, uo, oo))

    drawing = None
    if layout:
        strokes = []
        for c, pts2 in enumerate(curves):
            P = np.asarray(pts2, dtype=float)[:, :2]
            Q = np.vstack([P, P[:1]])
            seglen = np.hypot(*(Q[1:] - Q[:-1]).T)
            cum = np.concatenate([[0.0], np.cumsum(seglen)])
            cuts = [cum[e.seg] + e.t * seglen[e.seg] for e in events[c] if not e.over]
            strokes.append(
                tuple(tuple((round(float(x), 3), round(float(y), 3)) for x, y in s)
                      for s in _stroke_points(P, cuts, gap))
            )
        drawing = Layout(tuple(strokes))
    d = LinkDiagram(tuple(crossings), tuple(components), tuple(roles), drawing)
    return PolyDiagram(d, tuple(events))


def closed_two_braid(
    q: int,
    top_cuts: Sequence[float] = (),
    bottom_cuts: Sequence[float] = (),
    cut_width: float = 0.16,
) -> tuple[list[tuple[float, float, float]], dict]:
    """Space polyline of the closed 2-braid sigma_1^q (right-handed crossings).

    The braid runs left to right in ``[0, q] x [0, 1]``; the two closing
    arcs return over the top at heights 2 and 3.  Optional cut points add a
    pair of vertices ``cut_width`` apart on the outermost top arc (which runs
    leftward) or on the bottom run ``[-2, 0] x {0}`` (which runs rightward).
    Returns the polyline and a map from ``("top", i)`` / ``("bottom", i)`` to
    the index of the first vertex of each cut pair.
    """
    pts: list[tuple[float, float, float]] = []

    def braid_pass(y0):
        y = y0
        for t in range(q):
            pts.append((t, y, 0.0))
            rising = y == 0
            z = -1.0 if rising else 1.0
            a, b = (0.25, 0.75) if rising else (0.75, 0.25)
            pts.append((t + 0.25, a, z))
            pts.append((t + 0.75, b, z))
            y = 1 - y

    cuts: dict = {}
    braid_pass(0)
    pts += [(q, 1, 0.0), (q + 1, 1, 0.0), (q + 1, 2, 0.0), (-1, 2, 0.0), (-1, 1, 0.0)]
    braid_pass(1)
    pts += [(q, 0, 0.0), (q + 2, 0, 0.0), (q + 2, 3, 0.0)]
    h = cut_width / 2
    for i, x in sorted(enumerate(top_cuts), key=lambda p: -p[1]):
        if not -2 + h < x < q + 2 - h:
            raise ValueError(f"top cut at {x} outside the top arc")
        cuts[("top", i)] = len(pts)
        pts += [(x + h, 3, 0.0), (x - h, 3, 0.0)]
    pts += [(-2, 3, 0.0), (-2, 0, 0.0)]
    for i, x in sorted(enumerate(bottom_cuts), key=lambda p: p[1]):
        if not -2 + h < x < -h:
            raise ValueError(f"bottom cut at {x} outside the bottom run")
        cuts[("bottom", i)] = len(pts)
        pts += [(x - h, 0, 0.0), (x + h, 0, 0.0)]
    return [(float(x), float(y), float(z)) for x, y, z in pts], cuts


def offset_closed(pts: Sequence[Sequence[float]], dist: float) -> list[tuple[float, float, float]]:
    """Offset a closed space polyline to the left of travel by ``dist`` (miter joins)."""
    P = np.asarray(pts, dtype=float)
    xy = P[:, :2]
    d_in = xy - np.roll(xy, 1, axis=0)
    d_out = np.roll(xy, -1, axis=0) - xy

    def left(d):
        n = np.stack([-d[:, 1], d[:, 0]], axis=1)
        return n / np.hypot(n[:, 0], n[:, 1])[:, None]

    n1, n2 = left(d_in), left(d_out)
    m = (n1 + n2) / (1 + np.sum(n1 * n2, axis=1))[:, None]
    out = xy + dist * m
    return [(float(x), float(y), float(z)) for (x, y), z in zip(out, P[:, 2])]
