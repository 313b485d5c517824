"""Local rewrites of diagram codes and a bounded simplification search.

Move sites are located through the faces of the diagram's rotation system:
an R1 loop bounds a monogon, an R2 pair a bigon, an R3 triple a triangle.
New crossings get the sign forced by a fixed local picture of the move, so
every rewrite keeps the rotation system planar.

Kinds: ``R1-`` ``R1+`` ``R2-`` ``R2+`` ``R3`` ``VSLIDE-`` ``VSLIDE+``
``VTWIST-`` ``VTWIST+`` and ``MNCC`` (a crossing change; it does not
preserve the graph's isotopy class).
"""

from __future__ import annotations

import hashlib
import heapq
import itertools
import math
from dataclasses import dataclass, field

from .diagram import (
    Diagram,
    DiagramError,
    PASS_IN,
    Work,
    cut_endpoints,
    cut_edge_of,
    sort_ids,
    validate,
)

DEFAULT_BUDGET = 100_000
INSERT_ALLOWANCE = 2

REDUCING = ("R1-", "R2-", "VSLIDE-", "VTWIST-")
NEUTRAL = ("R3",)
INSERTING = ("R2+", "VSLIDE+", "VTWIST+")


class MoveError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class Move:
    kind: str
    site: tuple

    def __str__(self):
        return f"{self.kind}@" + ",".join(str(s) for s in self.site)

    @classmethod
    def parse(cls, text: str) -> "Move":
        kind, _, rest = text.partition("@")
        if not rest:
            raise MoveError(f"move {text!r} lacks a site")
        site = []
        for tok in rest.split(","):
            tok = tok.strip()
            try:
                site.append(int(tok))
            except ValueError:
                site.append(tok)
        return cls(kind, tuple(site))


def _sign(x: float) -> int:
    return 1 if x > 0 else -1


def _cross_sign(o, u) -> int:
    """Sign of a crossing whose over strand runs along ``o`` and under along ``u``."""
    return _sign(o[0] * u[1] - o[1] * u[0])


def _level_at(end) -> str:
    return end[1][0]


# ---------------------------------------------------------------------------
# pattern search


def _monogons(d: Diagram):
    for f in d.faces:
        if len(f) == 1:
            a = f[0][0]
            t, h = d.arcs[a]
            if t[0] == h[0] and t[0] in d.crossings:
                yield Move("R1-", (t[0],))


def _bigons(d: Diagram):
    for f in d.faces:
        if len(f) != 2:
            continue
        (x, _), (y, _) = f
        if x == y:
            continue
        tx, hx = d.arcs[x]
        ty, hy = d.arcs[y]
        nodes_x = {tx[0], hx[0]}
        nodes_y = {ty[0], hy[0]}
        if len(nodes_x) != 2 or nodes_x != nodes_y:
            continue
        a, b = sorted(nodes_x, key=str)
        if a in d.crossings and b in d.crossings:
            lx = {_level_at(tx), _level_at(hx)}
            ly = {_level_at(ty), _level_at(hy)}
            if len(lx) == 1 and len(ly) == 1 and lx != ly and d.crossings[a] != d.crossings[b]:
                yield Move("R2-", tuple(sort_ids((a, b))))
        else:
            v, c = (a, b) if b in d.crossings else (b, a)
            if v in d.vertices and c in d.crossings:
                lev = {_level_at(e) for e in (tx, hx, ty, hy) if e[0] == c}
                if len(lev) == 2:
                    yield Move("VTWIST-", (v, c))


def _triangles(d: Diagram):
    for f in d.faces:
        if len(f) != 3:
            continue
        arcs = [a for a, _ in f]
        if len(set(arcs)) != 3:
            continue
        nodes = set()
        ok = True
        kinds = []
        for a in arcs:
            t, h = d.arcs[a]
            if t[0] == h[0]:
                ok = False
                break
            nodes |= {t[0], h[0]}
            kinds.append((t, h))
        if not ok or len(nodes) != 3:
            continue
        if all(n in d.crossings for n in nodes):
            levels = sorted(_level_at(t) + _level_at(h) for t, h in kinds)
            mixed = [x for x in levels if x[0] != x[1]]
            if levels.count("oo") == 1 and levels.count("uu") == 1 and len(mixed) == 1:
                yield Move("R3", tuple(sort_ids(nodes)))
            continue
        verts = [n for n in nodes if n in d.vertices]
        if len(verts) != 1:
            continue
        v = verts[0]
        cs = sort_ids(n for n in nodes if n != v)
        if not all(c in d.crossings for c in cs):
            continue
        strand = [th for th in kinds if v not in (th[0][0], th[1][0])]
        if len(strand) != 1:
            continue
        t, h = strand[0]
        if _level_at(t) != _level_at(h):
            continue
        lev = _level_at(t)
        legs_ok = True
        for tt, hh in kinds:
            if (tt, hh) == (t, h):
                continue
            cend = tt if tt[0] != v else hh
            if _level_at(cend) == lev:
                legs_ok = False
        if legs_ok:
            yield Move("VSLIDE-", (v, cs[0], cs[1]))


def _vslide_up(d: Diagram):
    for v in d.vertices:
        legs = [d.slot_map[(v, s)] for s in (0, 1, 2)]
        if len(set(legs)) < 3:
            continue
        for k in (0, 1, 2):
            a = legs[k]
            other = d.head(a) if d.tail(a) == (v, k) else d.tail(a)
            if other[0] not in d.crossings:
                continue
            yield Move("VSLIDE+", (v, k))


def _vtwist_up(d: Diagram):
    for v in d.vertices:
        legs = [d.slot_map[(v, s)] for s in (0, 1, 2)]
        for i in (0, 1, 2):
            j = (i + 1) % 3
            if legs[i] == legs[j]:
                continue
            for lev in ("over", "under"):
                yield Move("VTWIST+", (v, i, lev))


def _r2_up(d: Diagram):
    for f in d.faces:
        for (a, da), (b, db) in itertools.combinations(f, 2):
            if a == b:
                continue
            for lev in ("over", "under"):
                yield Move("R2+", (a, da, b, db, lev))
    for a in sort_ids(d.arcs):
        if d.is_free_loop(a):
            for lev in ("over", "under"):
                yield Move("R2+", (a, 0, a, 0, lev))


def applicable_moves(d: Diagram, insertions: bool = True, kink_arcs=()) -> list:
    """All move instances at ``d`` in a deterministic order.

    Crossing-creating moves are listed only when ``insertions`` is true;
    ``R1+`` only at the arcs named in ``kink_arcs``.
    """
    out = set(_monogons(d)) | set(_bigons(d)) | set(_triangles(d))
    if insertions:
        out |= set(_vslide_up(d)) | set(_vtwist_up(d)) | set(_r2_up(d))
        for a in kink_arcs:
            for sign in (1, -1):
                for first in ("over", "under"):
                    out.add(Move("R1+", (a, sign, first)))
    order = {k: i for i, k in enumerate(REDUCING + NEUTRAL + INSERTING + ("R1+", "MNCC"))}
    return sorted(out, key=lambda m: (order[m.kind], tuple(str(s) for s in m.site)))


# ---------------------------------------------------------------------------
# rewriting


def apply_move(d: Diagram, m: Move) -> Diagram:
    """Apply ``m`` to ``d``; raises ``MoveError`` if the site does not match."""
    fn = _APPLY.get(m.kind)
    if fn is None:
        raise MoveError(f"unknown move kind {m.kind}")
    if m.kind not in ("R1+", "R2+", "VSLIDE+", "VTWIST+", "MNCC"):
        if m not in _pattern_moves(d):
            raise MoveError(f"site no longer matches: {m}")
    try:
        out = fn(d, *m.site)
    except (KeyError, IndexError, ValueError) as exc:
        raise MoveError(f"cannot apply {m}: {exc}") from exc
    errs = validate(out)
    if errs:
        raise MoveError(f"{m} produced an invalid diagram: {errs[0]}")
    if m.kind != "MNCC" and d.is_planar and not out.is_planar:
        raise MoveError(f"{m} broke planarity")
    return out


def _pattern_moves(d: Diagram):
    return set(_monogons(d)) | set(_bigons(d)) | set(_triangles(d))


def _r1_down(d, c):
    w = Work(d)
    w.remove_crossing(c)
    return w.freeze()


def _r2_down(d, c1, c2):
    w = Work(d)
    w.remove_crossing(c1)
    w.remove_crossing(c2)
    return w.freeze()


def _r1_up(d, a, sign, first):
    if a not in d.arcs:
        raise MoveError(f"unknown arc {a}")
    sign = int(sign)
    f = "o" if first == "over" else "u"
    s = "u" if f == "o" else "o"
    w = Work(d)
    c = w.fresh_node("c")
    w.crossings[c] = sign
    w.subdivide(a, [(c, f + "i", f + "o"), (c, s + "i", s + "o")])
    return w.freeze()


def _r2_up_apply(d, a, da, b, db, lev):
    if a not in d.arcs or b not in d.arcs:
        raise MoveError("unknown arc")
    da, db = int(da), int(db)
    fold = a == b
    if fold:
        if not d.is_free_loop(a):
            raise MoveError("R2+ of an arc with itself needs a free loop")
        a_dir, b_dir = 1, -1
    else:
        face = next((f for f in d.faces if (a, da) in f and (b, db) in f), None)
        if face is None:
            raise MoveError("darts do not share a face")
        a_dir = 1 if da > 0 else -1
        b_dir = -1 if db > 0 else 1
    # finger of a rises through b at x=-eps (P1) and returns at x=+eps (P2)
    fdir = {1: (0, a_dir), 2: (0, -a_dir)}
    bvec = (b_dir, 0)
    a_over = lev == "over"
    w = Work(d)
    cs = {}
    for p in (1, 2):
        c = w.fresh_node("c")
        o, u = (fdir[p], bvec) if a_over else (bvec, fdir[p])
        w.crossings[c] = _cross_sign(o, u)
        cs[p] = c
    la, lb = ("o", "u") if a_over else ("u", "o")
    a_order = (1, 2) if a_dir > 0 else (2, 1)
    b_order = (1, 2) if b_dir > 0 else (2, 1)
    a_pass = [(cs[p], la + "i", la + "o") for p in a_order]
    b_pass = [(cs[p], lb + "i", lb + "o") for p in b_order]
    if fold:
        w.subdivide(a, a_pass + b_pass)
    else:
        w.subdivide(a, a_pass)
        w.subdivide(b, b_pass)
    return w.freeze()


def _r3(d, *cs):
    w = Work(d)
    face = None
    for f in d.faces:
        arcs = [x for x, _ in f]
        if len(f) == 3 and {n for x in arcs for n in (d.tail(x)[0], d.head(x)[0])} == set(cs):
            face = arcs
            break
    if face is None:
        raise MoveError("no triangle")
    updates = []
    for s in face:
        (x1, l1), (x2, l2) = d.tail(s), d.head(s)
        p = d.slot_map[(x1, PASS_IN[l1])]
        r = d.slot_map[(x2, l2[0] + "o")]
        updates += [(p, 1, (x2, l2)), (s, 0, (x2, l2[0] + "o")), (s, 1, (x1, PASS_IN[l1])), (r, 0, (x1, l1))]
    for arc, which, _ in updates:
        old = w.arcs[arc][which]
        if w.slots.get(old) == arc:
            del w.slots[old]
    for arc, which, slot in updates:
        w.arcs[arc][which] = slot
    for arc, which, slot in updates:
        w.slots[slot] = arc
    return w.freeze()


def _leg_dir(d, v, slot, angle):
    a = d.slot_map[(v, slot)]
    vec = (math.cos(angle), math.sin(angle))
    if d.tail(a) == (v, slot):
        return vec
    return (-vec[0], -vec[1])


def _insert_pass(w: Work, c, strand_arc, strand_lev, leg_arc, leg_lev):
    w.subdivide(strand_arc, [(c, strand_lev + "i", strand_lev + "o")])
    w.subdivide(leg_arc, [(c, leg_lev + "i", leg_lev + "o")])


def _vslide_up_apply(d, v, k):
    k = int(k)
    legs = [d.slot_map[(v, s)] for s in (0, 1, 2)]
    if len(set(legs)) < 3:
        raise MoveError("vertex has a loop edge")
    L = legs[k]
    c = d.head(L)[0] if d.tail(L) == (v, k) else d.tail(L)[0]
    if c not in d.crossings:
        raise MoveError("leg does not end at a crossing")
    lslot = d.head(L)[1] if d.tail(L) == (v, k) else d.tail(L)[1]
    slev = "u" if lslot[0] == "o" else "o"
    rot = d.node_slots(c)
    north = rot[(rot.index(lslot) + 3) % 4] == slev + "o"
    w = Work(d)
    s_arc = w.slots[(c, slev + "i")]
    w.remove_crossing(c)
    s_arc = w.resolve(s_arc)
    km, kp = (k + 2) % 3, (k + 1) % 3
    leg_m, leg_p = w.slots[(v, km)], w.slots[(v, kp)]
    if s_arc in (leg_m, leg_p, w.slots[(v, k)]):
        raise MoveError("strand runs into the vertex")
    sdir = (0, 1) if north else (0, -1)
    angles = {km: 4 * math.pi / 3, kp: 2 * math.pi / 3}
    llev = "u" if slev == "o" else "o"
    new = {}
    for slot in (km, kp):
        c2 = w.fresh_node("c")
        ld = _leg_dir(d, v, slot, angles[slot])
        o, u = (sdir, ld) if slev == "o" else (ld, sdir)
        w.crossings[c2] = _cross_sign(o, u)
        new[slot] = c2
        w.subdivide(w.slots[(v, slot)], [(c2, llev + "i", llev + "o")])
    order = (km, kp) if north else (kp, km)
    w.subdivide(s_arc, [(new[s], slev + "i", slev + "o") for s in order])
    return w.freeze()


def _vslide_down(d, v, c1, c2):
    legs = {}
    strand = None
    for a in d.arcs:
        t, h = d.arcs[a]
        if t is None:
            continue
        ends = {t[0], h[0]}
        if ends == {v, c1} or ends == {v, c2}:
            vs = t if t[0] == v else h
            cend = h if t[0] == v else t
            legs[cend[0]] = (vs[1], a)
        elif ends == {c1, c2}:
            strand = a
    if strand is None or set(legs) != {c1, c2}:
        raise MoveError("no slide triangle")
    x, y = d.tail(strand), d.head(strand)
    slev = x[1][0]
    first_slot = legs[x[0]][0]
    slots = {legs[c1][0], legs[c2][0]}
    t = ({0, 1, 2} - slots).pop()
    north = first_slot == (t + 2) % 3
    w = Work(d)
    w.remove_crossing(c1)
    w.remove_crossing(c2)
    s_arc = w.resolve(strand)
    leg_t = w.slots[(v, t)]
    if s_arc == leg_t:
        raise MoveError("strand runs into the vertex")
    c = w.fresh_node("c")
    ld = _leg_dir(d, v, t, 0.0)
    sdir = (0, 1) if north else (0, -1)
    o, u = (sdir, ld) if slev == "o" else (ld, sdir)
    w.crossings[c] = _cross_sign(o, u)
    llev = "u" if slev == "o" else "o"
    _insert_pass(w, c, s_arc, slev, leg_t, llev)
    return w.freeze()


def _vtwist_up_apply(d, v, i, lev):
    i = int(i)
    j = (i + 1) % 3
    A, B = d.slot_map[(v, i)], d.slot_map[(v, j)]
    if A == B:
        raise MoveError("twisted legs belong to one arc")
    a_out = d.tail(A) == (v, i)
    b_out = d.tail(B) == (v, j)
    adir = (2, -1) if a_out else (-2, 1)
    bdir = (-1, 2) if b_out else (1, -2)
    a_over = lev == "over"
    la, lb = ("o", "u") if a_over else ("u", "o")
    w = Work(d)
    c = w.fresh_node("c")
    w.crossings[c] = _cross_sign(adir, bdir) if a_over else _cross_sign(bdir, adir)
    pa = w.subdivide(A, [(c, la + "i", la + "o")])
    pb = w.subdivide(B, [(c, lb + "i", lb + "o")])
    near_a = pa[0] if a_out else pa[-1]
    near_b = pb[0] if b_out else pb[-1]
    del w.slots[(v, i)]
    del w.slots[(v, j)]
    w.arcs[near_a][0 if a_out else 1] = (v, j)
    w.arcs[near_b][0 if b_out else 1] = (v, i)
    w.slots[(v, j)] = near_a
    w.slots[(v, i)] = near_b
    return w.freeze()


def _vtwist_down(d, v, c):
    vslots = []
    for a in d.arcs:
        t, h = d.arcs[a]
        if t is None:
            continue
        if {t[0], h[0]} == {v, c}:
            vslots.append(t[1] if t[0] == v else h[1])
    if len(vslots) != 2:
        raise MoveError("no twist bigon")
    s1, s2 = vslots
    w = Work(d)
    w.remove_crossing(c)
    a1, a2 = w.slots.pop((v, s1)), w.slots.pop((v, s2))
    for arc, old, new in ((a1, (v, s1), (v, s2)), (a2, (v, s2), (v, s1))):
        which = 0 if w.arcs[arc][0] == old else 1
        w.arcs[arc][which] = new
    w.slots[(v, s2)] = a1
    w.slots[(v, s1)] = a2
    return w.freeze()


def _mncc(d, c):
    if c not in d.crossings:
        raise MoveError(f"unknown crossing {c}")
    w = Work(d)
    w.flip_crossing(c)
    return w.freeze()


_APPLY = {
    "R1-": _r1_down,
    "R1+": _r1_up,
    "R2-": _r2_down,
    "R2+": _r2_up_apply,
    "R3": _r3,
    "VSLIDE-": _vslide_down,
    "VSLIDE+": _vslide_up_apply,
    "VTWIST-": _vtwist_down,
    "VTWIST+": _vtwist_up_apply,
    "MNCC": _mncc,
}

CROSSING_DELTA = {"R1-": -1, "R1+": 1, "R2-": -2, "R2+": 2, "R3": 0, "VSLIDE-": -1, "VSLIDE+": 1,
                  "VTWIST-": -1, "VTWIST+": 1, "MNCC": 0}


# ---------------------------------------------------------------------------
# search


@dataclass
class SimplificationTrace:
    initial: Diagram
    steps: list = field(default_factory=list)  # (Move, crossing count after)
    final: Diagram = None
    expansions: int = 0

    @property
    def final_crossings(self) -> int:
        return self.final.crossing_count

    def replay(self) -> Diagram:
        d = self.initial
        for m, n in self.steps:
            d = apply_move(d, m)
            if d.crossing_count != n:
                raise MoveError(f"replay mismatch after {m}")
        return d

    def lines(self) -> list:
        out = [f"start crossings={self.initial.crossing_count}"]
        out += [f"{m}  -> {n}" for m, n in self.steps]
        out.append(f"final crossings={self.final_crossings}")
        return out


def diagram_hash(d: Diagram) -> str:
    return hashlib.sha1(repr(d.canonical_key).encode()).hexdigest()


def simplify(d: Diagram, budget: int = DEFAULT_BUDGET, allowance: int = INSERT_ALLOWANCE) -> SimplificationTrace:
    """Best-first search for a diagram with fewer crossings.

    Priority is (crossings, insertions used, canonical hash).  Moves that add
    crossings are tried only while the result stays within ``allowance`` of
    the fewest crossings seen so far.
    """
    start_key = diagram_hash(d)
    best = (d.crossing_count, 0, start_key)
    parents = {start_key: (None, None, d)}
    heap = [(d.crossing_count, 0, start_key)]
    expansions = 0
    best_min = d.crossing_count
    while heap and expansions < budget and best[0] > 0:
        n, ins, key = heapq.heappop(heap)
        cur = parents[key][2]
        expansions += 1
        insert_ok = n + 1 <= best_min + allowance
        for m in applicable_moves(cur, insertions=insert_ok):
            nxt_n = n + CROSSING_DELTA[m.kind]
            if nxt_n > best_min + allowance:
                continue
            try:
                nxt = apply_move(cur, m)
            except MoveError:
                continue
            k2 = diagram_hash(nxt)
            if k2 in parents:
                continue
            ins2 = ins + (1 if CROSSING_DELTA[m.kind] > 0 else 0)
            parents[k2] = (key, m, nxt)
            heapq.heappush(heap, (nxt_n, ins2, k2))
            if (nxt_n, ins2, k2) < best:
                best = (nxt_n, ins2, k2)
            best_min = min(best_min, nxt_n)
            if nxt_n == 0:
                break
    steps = []
    key = best[2]
    while parents[key][0] is not None:
        pk, m, dd = parents[key]
        steps.append((m, dd.crossing_count))
        key = pk
    steps.reverse()
    return SimplificationTrace(d, steps, parents[best[2]][2], expansions)


# ---------------------------------------------------------------------------
# Marumoto-Nakanishi descent on a broken diagram


def terminal_walk(b: Diagram) -> list:
    """Crossing passes met walking from the endpoints along the cut edge.

    Returns ``(crossing, level)`` pairs in walk order: forward from the
    tail endpoint to the next vertex, then backward from the head endpoint.
    A knot edge with no vertex is walked once, forward.
    """
    p_in, p_out = cut_endpoints(b)
    e = cut_edge_of(b)
    seq = list(b.edges[e])
    brk = next(i for i, a in enumerate(seq) if b.head(a) == (p_in, "p"))
    fwd = seq[brk + 1:] if brk + 1 < len(seq) else []
    back = list(reversed(seq[:brk + 1]))
    out = []
    if b.is_loop_edge(e):
        fwd = seq  # runs from p_out round to p_in
        back = []
    for a in fwd:
        h = b.head(a)
        if h[0] in b.crossings:
            out.append((h[0], h[1][0]))
    for a in back:
        t = b.tail(a)
        if t[0] in b.crossings:
            out.append((t[0], t[1][0]))
    return out


@dataclass
class DescendRecord:
    before: Diagram
    after: Diagram
    changed: list

    @property
    def moves(self):
        return [Move("MNCC", (c,)) for c in self.changed]


def mn_endpoint_descend(b: Diagram, record: bool = False):
    """Change every crossing first met from below on the cut edge's terminal walk.

    Afterwards the cut edge lies over every other strand and is descending
    with respect to itself.
    """
    if not b.is_broken:
        raise DiagramError("descent needs a broken diagram")
    seen = set()
    changed = []
    for c, lev in terminal_walk(b):
        if c in seen:
            continue
        seen.add(c)
        if lev == "u":
            changed.append(c)
    w = Work(b)
    for c in changed:
        w.flip_crossing(c)
    out = w.freeze()
    if record:
        return out, DescendRecord(b, out, changed)
    return out


def terminal_segments_over(b: Diagram) -> list:
    """Crossings whose first pass on the terminal walk is not over (should be empty)."""
    seen = set()
    bad = []
    for c, lev in terminal_walk(b):
        if c in seen:
            continue
        seen.add(c)
        if lev != "o":
            bad.append(c)
    return bad
