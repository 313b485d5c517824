"""Constructors for diagrams: braid closures, plane polylines, connected sums."""

from __future__ import annotations

import math
from fractions import Fraction

from .diagram import Diagram, PASS_OUT, Work, check_valid, sort_ids


def _edges_from_ends(arcs: dict, crossings: dict, vertices, endpoints) -> dict:
    """Group arcs into maximal chains through crossings."""
    slot_arc = {}
    for a, (t, h) in arcs.items():
        if t is not None:
            slot_arc[t] = a
    edges = {}
    used = set()
    n = 0
    stops = set(vertices) | set(endpoints)
    starts = [a for a in sort_ids(arcs) if arcs[a][0] is not None and arcs[a][0][0] in stops]
    for a in starts + sort_ids(arcs):
        if a in used:
            continue
        seq = [a]
        used.add(a)
        cur = a
        while True:
            h = arcs[cur][1]
            if h is None or h[0] not in crossings:
                break
            nxt = slot_arc[(h[0], PASS_OUT[h[1]])]
            if nxt in used:
                break
            seq.append(nxt)
            used.add(nxt)
            cur = nxt
        n += 1
        edges[f"e{n}"] = tuple(seq)
    return edges


def braid_closure(word, strands: int, name: str = "") -> Diagram:
    """Closure of a braid word; ``i`` is σ_i (left strand over), ``-i`` its inverse."""
    arcs = {}
    crossings = {}
    counter = [0]

    def new_arc(tail):
        counter[0] += 1
        a = f"a{counter[0]}"
        arcs[a] = [tail, None]
        return a

    start = [new_arc(None) for _ in range(strands)]
    cur = list(start)
    for k, g in enumerate(word, 1):
        i = abs(g) - 1
        c = f"c{k}"
        crossings[c] = 1 if g > 0 else -1
        left, right = cur[i], cur[i + 1]
        if g > 0:
            arcs[left][1] = (c, "oi")
            arcs[right][1] = (c, "ui")
            cur[i + 1] = new_arc((c, "oo"))
            cur[i] = new_arc((c, "uo"))
        else:
            arcs[left][1] = (c, "ui")
            arcs[right][1] = (c, "oi")
            cur[i + 1] = new_arc((c, "uo"))
            cur[i] = new_arc((c, "oo"))
    for p in range(strands):
        top, bottom = cur[p], start[p]
        if top == bottom:
            continue
        arcs[bottom][0] = arcs[top][0]
        del arcs[top]
    arcs = {a: (tuple(t) if t else None, tuple(h) if h else None) for a, (t, h) in arcs.items()}
    edges = _edges_from_ends(arcs, crossings, (), ())
    w = Work(Diagram(crossings, (), (), arcs, edges, name))
    return _renumber(w.freeze(), name)


def _renumber(d: Diagram, name: str = "") -> Diagram:
    """Rename arcs a1.., crossings c1.. in edge order; keeps edges and vertices."""
    amap = {}
    for e in sort_ids(d.edges):
        for a in d.edges[e]:
            amap[a] = f"a{len(amap) + 1}"
    cmap = {}
    for e in sort_ids(d.edges):
        for a in d.edges[e]:
            h = d.head(a)
            if h is not None and h[0] in d.crossings and h[0] not in cmap:
                cmap[h[0]] = f"c{len(cmap) + 1}"
    nmap = dict(cmap)

    def slot(s):
        return None if s is None else (nmap.get(s[0], s[0]), s[1])

    arcs = {amap[a]: (slot(t), slot(h)) for a, (t, h) in d.arcs.items()}
    crossings = {cmap[c]: s for c, s in d.crossings.items()}
    edges = {e: tuple(amap[a] for a in seq) for e, seq in d.edges.items()}
    w = Work(Diagram(crossings, d.vertices, d.endpoints, arcs, edges, name or d.name))
    return check_valid(w.freeze())


def free_loop(name: str = "unknot") -> Diagram:
    return Diagram({}, (), (), {"a1": (None, None)}, {"e1": ("a1",)}, name)


def planar_theta(name: str = "planar-theta") -> Diagram:
    """Two vertices joined by three crossing-free edges e1, e2, e3 (v1 -> v2)."""
    arcs = {
        "a1": (("v1", 0), ("v2", 2)),
        "a2": (("v1", 1), ("v2", 1)),
        "a3": (("v1", 2), ("v2", 0)),
    }
    return check_valid(Diagram({}, ("v1", "v2"), (), arcs, {"e1": ("a1",), "e2": ("a2",), "e3": ("a3",)}, name))


# ---------------------------------------------------------------------------
# polylines


def _seg_intersection(p, q, r, s):
    """Parameters (t, u) of a proper crossing of segments pq and rs, else None."""
    d1 = (q[0] - p[0], q[1] - p[1])
    d2 = (s[0] - r[0], s[1] - r[1])
    den = d1[0] * d2[1] - d1[1] * d2[0]
    if den == 0:
        return None
    w = (r[0] - p[0], r[1] - p[1])
    t = Fraction(w[0] * d2[1] - w[1] * d2[0], den)
    u = Fraction(w[0] * d1[1] - w[1] * d1[0], den)
    if 0 < t < 1 and 0 < u < 1:
        return t, u
    return None


def from_polylines(vertices: dict, edges: dict, name: str = "", over=None) -> Diagram:
    """Build a diagram from plane polylines with heights.

    ``vertices`` maps a vertex id to integer ``(x, y)``.  ``edges`` maps an
    edge id to a point list ``[(x, y, z), ...]``; a list that starts and ends
    at a vertex position joins those vertices, a list whose first and last
    points coincide elsewhere is a closed knot component.  At each crossing
    the strand with the larger interpolated ``z`` passes over, unless the
    optional ``over`` callback ``over(edge_a, seg_a, edge_b, seg_b)`` returns
    the edge id that should be over.
    """
    pos_v = {tuple(p): v for v, p in vertices.items()}
    segs = []  # (edge, index, p, q)
    for e in sort_ids(edges):
        pts = edges[e]
        for i in range(len(pts) - 1):
            segs.append((e, i, pts[i], pts[i + 1]))
    events = {e: [] for e in edges}
    crossings = {}
    k = 0
    for i, (e1, i1, p, q) in enumerate(segs):
        for e2, i2, r, s in segs[i + 1:]:
            hit = _seg_intersection(p, q, r, s)
            if hit is None:
                continue
            t, u = hit
            z1 = p[2] + (q[2] - p[2]) * t
            z2 = r[2] + (s[2] - r[2]) * u
            if over is not None:
                top = over(e1, i1, e2, i2)
                first_over = top == e1
            else:
                if z1 == z2:
                    raise ValueError(f"ambiguous crossing between {e1}[{i1}] and {e2}[{i2}]")
                first_over = z1 > z2
            k += 1
            c = f"c{k}"
            d1 = (q[0] - p[0], q[1] - p[1])
            d2 = (s[0] - r[0], s[1] - r[1])
            o, un = (d1, d2) if first_over else (d2, d1)
            crossings[c] = 1 if o[0] * un[1] - o[1] * un[0] > 0 else -1
            events[e1].append((i1, t, c, "o" if first_over else "u"))
            events[e2].append((i2, u, c, "u" if first_over else "o"))

    vslots = {v: [] for v in vertices}
    for e, pts in edges.items():
        a, b = tuple(pts[0][:2]), tuple(pts[-1][:2])
        if a in pos_v and a != b:
            v = pos_v[a]
            vslots[v].append((math.atan2(pts[1][1] - a[1], pts[1][0] - a[0]), e, "start"))
        if b in pos_v and a != b:
            v = pos_v[b]
            vslots[v].append((math.atan2(pts[-2][1] - b[1], pts[-2][0] - b[0]), e, "end"))
    vslot_of = {}
    for v, lst in vslots.items():
        if len(lst) != 3:
            raise ValueError(f"vertex {v} has degree {len(lst)}")
        for idx, (_, e, which) in enumerate(sorted(lst)):
            vslot_of[(e, which)] = (v, idx)

    arcs = {}
    edge_arcs = {}
    n = 0
    for e in sort_ids(edges):
        pts = edges[e]
        evs = sorted(events[e])
        closed = tuple(pts[0][:2]) == tuple(pts[-1][:2]) and tuple(pts[0][:2]) not in pos_v
        seq = []
        start = None if closed else vslot_of[(e, "start")]
        end = None if closed else vslot_of[(e, "end")]
        if closed and not evs:
            n += 1
            arcs[f"a{n}"] = (None, None)
            edge_arcs[e] = (f"a{n}",)
            continue
        tail = start
        for _, _, c, lev in evs:
            n += 1
            a = f"a{n}"
            arcs[a] = (tail, (c, lev + "i"))
            seq.append(a)
            tail = (c, lev + "o")
        if closed:
            first = seq[0]
            arcs[first] = (tail, arcs[first][1])
        else:
            n += 1
            a = f"a{n}"
            arcs[a] = (tail, end)
            seq.append(a)
        edge_arcs[e] = tuple(seq)
    d = Diagram(crossings, tuple(sort_ids(vertices)), (), arcs, edge_arcs, name)
    return _renumber(Work(d).freeze(), name)


def crossing_tunnel(d: Diagram, c: str, name: str = "") -> Diagram:
    """Add an edge ``e1`` spanning crossing ``c`` between its two strands.

    Vertex ``v1`` is placed on the over strand just before ``c`` and ``v2``
    on the under strand just after it; the new edge runs between them in
    the face they share, so it meets no other strand.  Vertex slot orders
    are the ones that keep the diagram planar.  Applied to a knot diagram
    this yields a θ-curve whose ``e2 ∪ e3`` constituent is the knot.
    """
    if d.vertices or d.endpoints:
        raise ValueError("crossing_tunnel needs a diagram without vertices")
    if c not in d.crossings:
        raise ValueError(f"unknown crossing {c}")
    sm = d.slot_map
    a_in, b_out = sm[(c, "oi")], sm[(c, "uo")]
    if a_in == b_out:
        raise ValueError(f"crossing {c} closes a one-arc loop")
    for order1 in ((0, 1, 2), (0, 2, 1)):
        for order2 in ((0, 1, 2), (0, 2, 1)):
            arcs = {a: list(ends) for a, ends in d.arcs.items()}
            # v1 slots: (in from a_in, chord out, on to c)
            arcs["x_in"] = [("v1", order1[2]), (c, "oi")]
            arcs[a_in][1] = ("v1", order1[0])
            arcs["x_chord"] = [("v1", order1[1]), ("v2", order2[1])]
            # v2 slots: (in from c, chord in, out along b_out)
            arcs["x_out"] = [(c, "uo"), ("v2", order2[0])]
            arcs[b_out][0] = ("v2", order2[2])
            arcs = {a: (tuple(t), tuple(h)) for a, (t, h) in arcs.items()}
            edges = _edges_from_ends(arcs, d.crossings, ("v1", "v2"), ())
            chord_edge = next(e for e, seq in edges.items() if seq == ("x_chord",))
            rest = [e for e in sort_ids(edges) if e != chord_edge]
            edges = {"e1": edges[chord_edge], "e2": edges[rest[0]], "e3": edges[rest[1]]}
            cand = Diagram(dict(d.crossings), ("v1", "v2"), (), arcs, edges, name or d.name)
            if cand.is_planar:
                return _renumber(Work(cand).freeze(), name or d.name)
    raise ValueError("no planar vertex order found")


# ---------------------------------------------------------------------------


def tie_in(d: Diagram, arc: str, knot: Diagram) -> Diagram:
    """Connected sum of a one-edge knot diagram into ``arc`` of ``d``."""
    if knot.vertices or len(knot.edges) != 1:
        raise ValueError("tie_in needs a knot diagram")
    w = Work(d)
    rename = {}
    for a in sort_ids(knot.arcs):
        rename[a] = w.fresh("a", set(w.arcs) | set(rename.values()))
    taken = set(w.crossings) | w.vertices
    cren = {}
    for c in sort_ids(knot.crossings):
        cren[c] = w.fresh("c", taken | set(cren.values()))

    def sl(s):
        return (cren[s[0]], s[1])

    kseq = list(knot.edges[next(iter(knot.edges))])
    b = kseq[0]
    for a in kseq:
        t, h = knot.arcs[a]
        w.arcs[rename[a]] = [sl(t), sl(h)]
        for s in (sl(t), sl(h)):
            w.slots[s] = rename[a]
    for c, s in knot.crossings.items():
        w.crossings[cren[c]] = s
    # b runs T_b -> H_b inside the knot; splice arc (T_a -> H_a) through it
    nb = rename[b]
    e = w.edge_of[arc]
    t_a, h_a = w.arcs[arc]
    t_b, h_b = w.arcs[nb]
    w.arcs[arc] = [t_a, h_b]
    w.slots[h_b] = arc
    w.arcs[nb] = [t_b, h_a]
    w.slots[h_a] = nb
    rest = [rename[a] for a in kseq[1:]] + [nb]
    seq = w.edges[e]
    i = seq.index(arc)
    w.edges[e] = seq[:i + 1] + rest + seq[i + 1:]
    for a in rest:
        w.edge_of[a] = e
    return check_valid(w.freeze())
