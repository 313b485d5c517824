"""Combinatorial knotted-trivalent-graph diagrams.

A diagram is a set of nodes (crossings, trivalent vertices, endpoints) joined
by directed arcs.  Each arc runs from a tail slot to a head slot; arcs are
grouped into oriented graph edges.  Crossing slots are ``oi``/``oo`` (over
strand in/out) and ``ui``/``uo`` (under strand in/out).  Vertex slots are
``0, 1, 2`` in counterclockwise order, an endpoint has the single slot ``p``.
An arc with no ends is a free (crossing-less) loop.

The planar rotation at a crossing follows from its sign, so every diagram
carries a rotation system; faces and the Euler characteristic are computed
from it and the move engine uses them to locate genuine local patterns.
"""

from __future__ import annotations

import itertools
import re
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Optional

Slot = tuple  # (node id, slot name)

CROSSING_SLOTS = ("oi", "oo", "ui", "uo")
IN_SLOTS = frozenset({"oi", "ui"})
PASS_OUT = {"oi": "oo", "ui": "uo"}
PASS_IN = {"oo": "oi", "uo": "ui"}

# counterclockwise slot order around a crossing, by sign
ROTATION = {
    1: ("oo", "uo", "oi", "ui"),
    -1: ("oo", "ui", "oi", "uo"),
}


class DiagramError(ValueError):
    """Raised when an operation's precondition on a diagram fails."""


def natural_key(ident: str):
    """Sort key placing ``e2`` before ``e10``."""
    return tuple(int(t) if t.isdigit() else t for t in re.split(r"(\d+)", str(ident)) if t != "")


def sort_ids(ids: Iterable[str]) -> list:
    return sorted(ids, key=natural_key)


@dataclass(frozen=True)
class Diagram:
    """Immutable KTG diagram code.

    ``arcs`` maps arc id to ``(tail, head)`` where each end is a slot
    ``(node, slot)`` or ``None`` for free loops.  ``edges`` maps edge id to
    its arc sequence in orientation order.
    """

    crossings: dict = field(default_factory=dict)
    vertices: tuple = ()
    endpoints: tuple = ()
    arcs: dict = field(default_factory=dict)
    edges: dict = field(default_factory=dict)
    name: str = ""

    # -- derived indices -------------------------------------------------
    @cached_property
    def slot_map(self) -> dict:
        out = {}
        for a in sort_ids(self.arcs):
            for end in self.arcs[a]:
                if end is not None:
                    out.setdefault(end, a)
        return out

    @cached_property
    def edge_of(self) -> dict:
        return {a: e for e, seq in self.edges.items() for a in seq}

    def tail(self, arc):
        return self.arcs[arc][0]

    def head(self, arc):
        return self.arcs[arc][1]

    def node_kind(self, node) -> str:
        if node in self.crossings:
            return "crossing"
        if node in self._vertex_set:
            return "vertex"
        if node in self._endpoint_set:
            return "endpoint"
        raise KeyError(node)

    @cached_property
    def _vertex_set(self):
        return frozenset(self.vertices)

    @cached_property
    def _endpoint_set(self):
        return frozenset(self.endpoints)

    def node_slots(self, node) -> tuple:
        """Slots of ``node`` in counterclockwise order."""
        if node in self.crossings:
            return ROTATION[self.crossings[node]]
        if node in self._vertex_set:
            return (0, 1, 2)
        return ("p",)

    @property
    def crossing_count(self) -> int:
        return len(self.crossings)

    @property
    def is_broken(self) -> bool:
        return bool(self.endpoints)

    def is_free_loop(self, arc) -> bool:
        return self.arcs[arc] == (None, None)

    def pass_arcs(self, c, level: str) -> tuple:
        """(in arc, out arc) of the over (``"o"``) or under (``"u"``) pass of crossing c."""
        return self.slot_map[(c, level + "i")], self.slot_map[(c, level + "o")]

    def edge_ends(self, e) -> tuple:
        """Vertices at the start and end of edge ``e`` (``None`` where absent)."""
        seq = self.edges[e]
        t = self.tail(seq[0])
        h = self.head(seq[-1])
        first = t[0] if t is not None and t[0] in self._vertex_set else None
        last = h[0] if h is not None and h[0] in self._vertex_set else None
        return first, last

    def is_loop_edge(self, e) -> bool:
        """True if ``e`` meets no vertex (a knot component, possibly cut)."""
        return self.edge_ends(e) == (None, None)

    # -- geometry of the rotation system ----------------------------------
    def next_dart(self, dart):
        """Next dart along the face lying to the left of ``dart``."""
        arc, direction = dart
        end = self.arcs[arc][1] if direction > 0 else self.arcs[arc][0]
        node, slot = end
        rot = self.node_slots(node)
        nslot = rot[(rot.index(slot) - 1) % len(rot)]
        b = self.slot_map[(node, nslot)]
        if self.arcs[b][0] == (node, nslot):
            return (b, 1)
        return (b, -1)

    @cached_property
    def faces(self) -> tuple:
        """Faces as tuples of darts, each traversed with the face on the left."""
        seen = set()
        out = []
        for a in sort_ids(self.arcs):
            if self.is_free_loop(a):
                continue
            for d in ((a, 1), (a, -1)):
                if d in seen:
                    continue
                face = []
                cur = d
                while cur not in seen:
                    seen.add(cur)
                    face.append(cur)
                    cur = self.next_dart(cur)
                out.append(tuple(face))
        return tuple(out)

    @cached_property
    def components(self) -> tuple:
        """Connected components as sorted tuples of arc ids."""
        parent = {a: a for a in self.arcs}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        by_node = {}
        for a, ends in self.arcs.items():
            for end in ends:
                if end is not None:
                    by_node.setdefault(end[0], []).append(a)
        for arcs in by_node.values():
            r = find(arcs[0])
            for b in arcs[1:]:
                parent[find(b)] = r
        groups = {}
        for a in self.arcs:
            groups.setdefault(find(a), []).append(a)
        return tuple(sorted((tuple(sort_ids(g)) for g in groups.values()), key=lambda g: natural_key(g[0])))

    def euler_characteristics(self) -> list:
        """V - E + F for every component that has nodes."""
        face_of = {}
        for i, f in enumerate(self.faces):
            for dart in f:
                face_of[dart] = i
        out = []
        for comp in self.components:
            if len(comp) == 1 and self.is_free_loop(comp[0]):
                continue
            nodes = {end[0] for a in comp for end in self.arcs[a]}
            faces = {face_of[(a, s)] for a in comp for s in (1, -1)}
            out.append(len(nodes) - len(comp) + len(faces))
        return out

    @cached_property
    def is_planar(self) -> bool:
        """True if the rotation system embeds every component in the sphere."""
        return all(x == 2 for x in self.euler_characteristics())

    # -- identity -----------------------------------------------------------
    @cached_property
    def canonical_key(self) -> tuple:
        return canonical_key(self)

    def isomorphic(self, other: "Diagram") -> bool:
        return self.canonical_key == other.canonical_key

    def with_name(self, name: str) -> "Diagram":
        return Diagram(dict(self.crossings), self.vertices, self.endpoints, dict(self.arcs), dict(self.edges), name)


# ---------------------------------------------------------------------------
# validation


def _slot_is_tail(d: Diagram, node, slot) -> Optional[bool]:
    """Whether ``slot`` must hold an arc tail (``None`` if either is allowed)."""
    if node in d.crossings:
        return slot not in IN_SLOTS
    return None


def validate(d: Diagram) -> list:
    """Return a list of invariant violations; empty means the diagram is valid."""
    errs = []
    vset = set(d.vertices)
    eset = set(d.endpoints)
    cset = set(d.crossings)
    if len(vset) != len(d.vertices) or len(eset) != len(d.endpoints):
        errs.append("duplicate node identifier")
    for n in (vset & cset) | (vset & eset) | (cset & eset):
        errs.append(f"node {n}: identifier used by two nodes")
    for c, s in d.crossings.items():
        if s not in (1, -1):
            errs.append(f"crossing {c}: sign {s!r} not in {{+1, -1}}")

    used = {}
    for a in sort_ids(d.arcs):
        ends = d.arcs[a]
        if (ends[0] is None) != (ends[1] is None):
            errs.append(f"arc {a}: exactly one end missing")
        for which, end in zip(("tail", "head"), ends):
            if end is None:
                continue
            node, slot = end
            if node in cset:
                if slot not in CROSSING_SLOTS:
                    errs.append(f"arc {a}: bad crossing slot {slot!r} at {node}")
                    continue
                must_tail = slot not in IN_SLOTS
                if must_tail != (which == "tail"):
                    errs.append(f"arc {a}: {which} at {node}.{slot} has wrong direction")
            elif node in vset:
                if slot not in (0, 1, 2):
                    errs.append(f"arc {a}: bad vertex slot {slot!r} at {node}")
                    continue
            elif node in eset:
                if slot != "p":
                    errs.append(f"arc {a}: bad endpoint slot {slot!r} at {node}")
                    continue
            else:
                errs.append(f"arc {a}: unknown node {node}")
                continue
            if end in used:
                errs.append(f"slot reused: {node}.{slot} by arcs {used[end]} and {a}")
            else:
                used[end] = a

    for c in sort_ids(cset):
        for s in CROSSING_SLOTS:
            if (c, s) not in used:
                errs.append(f"crossing {c}: slot {s} empty")
    for v in sort_ids(vset):
        for s in (0, 1, 2):
            if (v, s) not in used:
                errs.append(f"vertex {v}: slot {s} empty")
    for p in sort_ids(eset):
        if (p, "p") not in used:
            errs.append(f"endpoint {p}: slot empty")

    seen = {}
    for e in sort_ids(d.edges):
        seq = d.edges[e]
        if not seq:
            errs.append(f"edge {e}: empty")
        for a in seq:
            if a not in d.arcs:
                errs.append(f"edge {e}: unknown arc {a}")
            elif a in seen:
                errs.append(f"arc {a}: in edges {seen[a]} and {e}")
            else:
                seen[a] = e
    for a in sort_ids(d.arcs):
        if a not in seen:
            errs.append(f"arc {a}: not in any edge")
    if errs:
        return errs

    for e in sort_ids(d.edges):
        errs.extend(_chain_errors(d, e))

    if len(eset) not in (0, 2):
        errs.append(f"broken diagram needs 0 or 2 endpoints, found {len(eset)}")
    elif eset:
        on = {d.edge_of[d.slot_map[(p, "p")]] for p in eset}
        if len(on) != 1:
            errs.append("endpoints lie on different edges")
        heads = sum(1 for p in eset if d.head(d.slot_map[(p, "p")]) == (p, "p"))
        if heads != 1:
            errs.append("endpoints must be one arc head and one arc tail")
    return errs


def _chain_errors(d: Diagram, e) -> list:
    errs = []
    seq = d.edges[e]
    if len(seq) == 1 and d.is_free_loop(seq[0]):
        return errs
    for a in seq:
        if d.is_free_loop(a):
            errs.append(f"edge {e}: free loop arc {a} inside a longer edge")
            return errs
    vset = set(d.vertices)
    breaks = 0

    def links(x, y):
        h = d.head(x)
        t = d.tail(y)
        if h[0] in d.crossings:
            return t == (h[0], PASS_OUT[h[1]])
        return False

    for x, y in zip(seq, seq[1:]):
        if links(x, y):
            continue
        h, t = d.head(x), d.tail(y)
        if h[0] in d.endpoints and t[0] in d.endpoints:
            breaks += 1
            continue
        errs.append(f"edge {e}: arcs {x} -> {y} not head-to-tail through a crossing")
    first_t = d.tail(seq[0])
    last_h = d.head(seq[-1])
    if first_t[0] in d.crossings:
        # closed loop through crossings only
        if not links(seq[-1], seq[0]):
            errs.append(f"edge {e}: loop does not close ({seq[-1]} -> {seq[0]})")
    elif last_h[0] in d.crossings:
        errs.append(f"edge {e}: ends inside crossing {last_h[0]}")
    for a in seq[1:]:
        t = d.tail(a)
        if t[0] in vset:
            errs.append(f"edge {e}: passes through vertex {t[0]}")
    if breaks > 1:
        errs.append(f"edge {e}: more than one break")
    return errs


def check_valid(d: Diagram) -> Diagram:
    errs = validate(d)
    if errs:
        raise DiagramError("invalid diagram: " + "; ".join(errs[:5]))
    return d


# ---------------------------------------------------------------------------
# canonical form


def _component_code(d: Diagram, comp) -> tuple:
    best = None
    sm = d.slot_map
    for start in comp:
        alab = {start: 0}
        nlab = {}
        queue = deque([start])
        while queue:
            a = queue.popleft()
            for end in d.arcs[a]:
                node, slot = end
                if node in nlab:
                    continue
                nlab[node] = len(nlab)
                if node in d.crossings:
                    order = CROSSING_SLOTS
                else:
                    rot = d.node_slots(node)
                    i = rot.index(slot)
                    order = rot[i:] + rot[:i]
                for s in order:
                    b = sm[(node, s)]
                    if b not in alab:
                        alab[b] = len(alab)
                        queue.append(b)
        descs = []
        for node in nlab:
            if node in d.crossings:
                descs.append(("c", d.crossings[node]) + tuple(alab[sm[(node, s)]] for s in CROSSING_SLOTS))
            else:
                ring = tuple((alab[sm[(node, s)]], d.tail(sm[(node, s)]) == (node, s)) for s in d.node_slots(node))
                rots = min(ring[i:] + ring[:i] for i in range(len(ring)))
                descs.append(("v" if node in d.vertices else "p",) + rots)
        code = tuple(sorted(descs))
        if best is None or code < best:
            best = code
    return best


def canonical_key(d: Diagram) -> tuple:
    """Identifier-free code; equal keys iff the diagrams are isomorphic."""
    free = 0
    codes = []
    for comp in d.components:
        if len(comp) == 1 and d.is_free_loop(comp[0]):
            free += 1
        else:
            codes.append(_component_code(d, comp))
    return (free, tuple(sorted(codes)))


# ---------------------------------------------------------------------------
# mutable working copy used by the surgery operations and the move engine


class Work:
    """Mutable copy of a diagram; ``freeze`` returns a new ``Diagram``."""

    def __init__(self, d: Diagram):
        self.crossings = dict(d.crossings)
        self.vertices = set(d.vertices)
        self.endpoints = set(d.endpoints)
        self.arcs = {a: list(ends) for a, ends in d.arcs.items()}
        self.edges = {e: list(seq) for e, seq in d.edges.items()}
        self.slots = dict(d.slot_map)
        self.edge_of = dict(d.edge_of)
        self.alias = {}
        self.name = d.name

    def fresh(self, prefix: str, taken) -> str:
        nums = [int(m.group(1)) for k in taken if (m := re.fullmatch(re.escape(prefix) + r"(\d+)", str(k)))]
        n = max(nums, default=0) + 1
        while f"{prefix}{n}" in taken:
            n += 1
        return f"{prefix}{n}"

    def fresh_arc(self) -> str:
        return self.fresh("a", self.arcs)

    def fresh_node(self, prefix: str) -> str:
        taken = set(self.crossings) | self.vertices | self.endpoints
        return self.fresh(prefix, taken)

    def resolve(self, a):
        while a in self.alias:
            a = self.alias[a]
        return a

    def set_end(self, a, which: int, end):
        old = self.arcs[a][which]
        if old is not None and self.slots.get(old) == a:
            del self.slots[old]
        self.arcs[a][which] = end
        if end is not None:
            self.slots[end] = a

    def splice(self, x, y):
        """Join arc ``x`` (ending at a freed slot) to arc ``y`` (starting at one).

        Both must be consecutive in the same edge.  ``x`` survives.
        """
        hx, ty = self.arcs[x][1], self.arcs[y][0]
        for s in (hx, ty):
            if s is not None and s in self.slots:
                del self.slots[s]
        if x == y:
            self.arcs[x] = [None, None]
            return x
        hy = self.arcs[y][1]
        self.arcs[x][1] = hy
        if hy is not None:
            self.slots[hy] = x
        del self.arcs[y]
        e = self.edge_of.pop(y)
        self.edges[e].remove(y)
        self.alias[y] = x
        return x

    def remove_crossing(self, c):
        sign = self.crossings.pop(c)
        for lev in ("o", "u"):
            x = self.slots[(c, lev + "i")]
            y = self.slots[(c, lev + "o")]
            self.splice(x, y)
        return sign

    def flip_crossing(self, c):
        """Exchange over and under strands at ``c`` (a crossing change)."""
        swap = {"oi": "ui", "ui": "oi", "oo": "uo", "uo": "oo"}
        arcs = {s: self.slots.pop((c, s)) for s in CROSSING_SLOTS}
        for s, a in arcs.items():
            which = 1 if s in IN_SLOTS else 0
            self.arcs[a][which] = (c, swap[s])
        for s, a in arcs.items():
            self.slots[(c, swap[s])] = a
        self.crossings[c] = -self.crossings[c]

    def reverse_edge(self, e):
        seq = self.edges[e]
        flips = {"oi": "oo", "oo": "oi", "ui": "uo", "uo": "ui"}
        touched = {}
        for a in seq:
            for end in self.arcs[a]:
                if end is not None and end in self.slots and self.slots[end] == a:
                    del self.slots[end]
        for a in seq:
            t, h = self.arcs[a]
            nt, nh = h, t
            if nt is not None and nt[0] in self.crossings:
                nt = (nt[0], flips[nt[1]])
                touched[(nt[0], nt[1][0])] = True
            if nh is not None and nh[0] in self.crossings:
                nh = (nh[0], flips[nh[1]])
            self.arcs[a] = [nt, nh]
        for a in seq:
            for end in self.arcs[a]:
                if end is not None:
                    self.slots[end] = a
        for c, _lev in touched:
            self.crossings[c] = -self.crossings[c]
        self.edges[e] = list(reversed(seq))

    def subdivide(self, a, passes):
        """Thread arc ``a`` through ``passes`` in order.

        Each pass is ``(node, in_slot, out_slot)``.  Returns the new arc ids
        in order along the old arc.
        """
        tail, head = self.arcs[a]
        e = self.edge_of[a]
        free = tail is None
        pieces = [a]
        k = len(passes) if free else len(passes) + 1
        for _ in range(k - 1):
            n = self.fresh_arc()
            self.arcs[n] = [None, None]
            pieces.append(n)
        for s in (tail, head):
            if s is not None and self.slots.get(s) == a:
                del self.slots[s]
        if free:
            for i, p in enumerate(pieces):
                nxt = passes[(i + 1) % len(passes)]
                self.arcs[p] = [(passes[i][0], passes[i][2]), (nxt[0], nxt[1])]
        else:
            ends = [tail] + [x for (node, si, so) in passes for x in ((node, si), (node, so))] + [head]
            for i, p in enumerate(pieces):
                self.arcs[p] = [ends[2 * i], ends[2 * i + 1]]
        for p in pieces:
            for s in self.arcs[p]:
                if s is not None:
                    self.slots[s] = p
            self.edge_of[p] = e
        seq = self.edges[e]
        i = seq.index(a)
        if free:
            self.edges[e] = pieces
        else:
            self.edges[e] = seq[:i] + pieces + seq[i + 1:]
        return pieces

    def normalize_loop_edges(self):
        """Rotate closed-loop edges so they start at their smallest arc id."""
        for e, seq in self.edges.items():
            t = self.arcs[seq[0]][0]
            if len(seq) > 1 and t is not None and t[0] in self.crossings:
                i = seq.index(min(seq, key=natural_key))
                self.edges[e] = seq[i:] + seq[:i]

    def freeze(self, name=None) -> Diagram:
        self.normalize_loop_edges()
        return Diagram(
            crossings={c: self.crossings[c] for c in sort_ids(self.crossings)},
            vertices=tuple(sort_ids(self.vertices)),
            endpoints=tuple(sort_ids(self.endpoints)),
            arcs={a: (tuple(self.arcs[a][0]) if self.arcs[a][0] else None,
                      tuple(self.arcs[a][1]) if self.arcs[a][1] else None) for a in sort_ids(self.arcs)},
            edges={e: tuple(self.edges[e]) for e in sort_ids(self.edges)},
            name=self.name if name is None else name,
        )


# ---------------------------------------------------------------------------
# graph-level operations


def constituent_cycles(d: Diagram) -> list:
    """Every edge subset forming a simple closed cycle of the abstract graph."""
    if d.is_broken:
        raise DiagramError("cycles undefined on broken diagram")
    edges = sort_ids(d.edges)
    ends = {e: d.edge_ends(e) for e in edges}
    out = []
    for e in edges:
        if ends[e] == (None, None):
            out.append((e,))
    graph_edges = [e for e in edges if ends[e] != (None, None)]
    for r in range(1, len(graph_edges) + 1):
        for sub in itertools.combinations(graph_edges, r):
            deg = {}
            for e in sub:
                for v in ends[e]:
                    deg[v] = deg.get(v, 0) + 1
            if any(k != 2 for k in deg.values()):
                continue
            if _connected(sub, ends):
                out.append(sub)
    return out


def _connected(sub, ends) -> bool:
    adj = {}
    for e in sub:
        a, b = ends[e]
        adj.setdefault(a, set()).add(b)
        adj.setdefault(b, set()).add(a)
    start = next(iter(adj))
    seen = {start}
    stack = [start]
    while stack:
        v = stack.pop()
        for w in adj[v] - seen:
            seen.add(w)
            stack.append(w)
    return len(seen) == len(adj)


def extract_subdiagram(d: Diagram, keep) -> Diagram:
    """Diagram of the subgraph spanned by the edges in ``keep``."""
    return extract_with_map(d, keep)[0]


def extract_with_map(d: Diagram, keep):
    """As ``extract_subdiagram``; also return original arc -> surviving arc."""
    keep = set(keep)
    if not keep:
        raise DiagramError("keep must be nonempty")
    unknown = keep - set(d.edges)
    if unknown:
        raise DiagramError(f"unknown edges {sort_ids(unknown)}")
    w = Work(d)
    dropped_arcs = {a for a in d.arcs if d.edge_of[a] not in keep}
    for c in sort_ids(d.crossings):
        over_kept = d.slot_map[(c, "oi")] not in dropped_arcs
        under_kept = d.slot_map[(c, "ui")] not in dropped_arcs
        if over_kept and under_kept:
            continue
        del w.crossings[c]
        for lev, kept in (("o", over_kept), ("u", under_kept)):
            if kept:
                w.splice(w.slots[(c, lev + "i")], w.slots[(c, lev + "o")])
            else:
                for s in (lev + "i", lev + "o"):
                    w.slots.pop((c, s), None)
    for a in list(w.arcs):
        if a in dropped_arcs:
            for end in w.arcs[a]:
                if end is not None and w.slots.get(end) == a:
                    del w.slots[end]
                if end is not None and end[0] in w.endpoints:
                    w.endpoints.discard(end[0])
            del w.arcs[a]
            w.edge_of.pop(a, None)
    for e in list(w.edges):
        if e not in keep:
            del w.edges[e]

    for v in sort_ids(d.vertices):
        live = [s for s in (0, 1, 2) if (v, s) in w.slots]
        if len(live) == 3:
            continue
        if len(live) == 1:
            raise DiagramError(f"non-closed subgraph: vertex {v} keeps a single edge end")
        w.vertices.discard(v)
        if len(live) == 2:
            _smooth_vertex(w, v, live)
    amap = {a: w.resolve(a) for a in d.arcs if a not in dropped_arcs}
    out = w.freeze()
    errs = validate(out)
    if errs:
        raise DiagramError("extraction produced invalid diagram: " + "; ".join(errs[:3]))
    return out, amap


def _smooth_vertex(w: Work, v, live):
    s, t = live
    a, b = w.slots[(v, s)], w.slots[(v, t)]
    ea, eb = w.edge_of[a], w.edge_of[b]
    if ea == eb:
        seq = w.edges[ea]
        x, y = seq[-1], seq[0]
        w.splice(x, y)
        return
    a_head = w.arcs[a][1] == (v, s)
    b_head = w.arcs[b][1] == (v, t)
    if a_head == b_head:
        # orient consistently: flip the edge with the larger identifier
        flip = max(ea, eb, key=natural_key)
        w.reverse_edge(flip)
        if flip == ea:
            a_head = not a_head
        else:
            b_head = not b_head
    if a_head:
        first, second, x, y = ea, eb, a, b
    else:
        first, second, x, y = eb, ea, b, a
    keep_id, gone = sorted((first, second), key=natural_key)
    merged = w.edges[first] + w.edges[second]
    del w.edges[gone]
    w.edges[keep_id] = merged
    for arc in merged:
        w.edge_of[arc] = keep_id
    w.splice(x, y)


def cut_edge(d: Diagram, e, position: int = 0) -> Diagram:
    """Break edge ``e`` inside its arc number ``position``."""
    if d.is_broken:
        raise DiagramError("diagram is already broken")
    if e not in d.edges:
        raise DiagramError(f"unknown edge {e}")
    seq = d.edges[e]
    if not 0 <= position < len(seq):
        raise DiagramError(f"position {position} out of range for edge {e} ({len(seq)} arcs)")
    w = Work(d)
    a = seq[position]
    p_in = w.fresh_node("p")
    w.endpoints.add(p_in)
    p_out = w.fresh_node("p")
    w.endpoints.add(p_out)
    if d.is_free_loop(a):
        w.set_end(a, 0, (p_out, "p"))
        w.set_end(a, 1, (p_in, "p"))
        return w.freeze()
    head = w.arcs[a][1]
    n = w.fresh_arc()
    w.set_end(a, 1, (p_in, "p"))
    w.arcs[n] = [(p_out, "p"), None]
    w.slots[(p_out, "p")] = n
    w.set_end(n, 1, head)
    w.edge_of[n] = e
    i = seq.index(a)
    lst = list(seq[:i + 1]) + [n] + list(seq[i + 1:])
    if d.is_loop_edge(e):
        lst = lst[i + 1:] + lst[:i + 1]
    w.edges[e] = lst
    out = w.freeze()
    return out


def cut_endpoints(d: Diagram) -> tuple:
    """(endpoint at an arc head, endpoint at an arc tail) of a broken diagram."""
    if len(d.endpoints) != 2:
        raise DiagramError("diagram is not broken")
    p, q = d.endpoints
    if d.head(d.slot_map[(p, "p")]) == (p, "p"):
        return p, q
    return q, p


def cut_edge_of(d: Diagram):
    p_in, _ = cut_endpoints(d)
    return d.edge_of[d.slot_map[(p_in, "p")]]


def reglue(d: Diagram) -> Diagram:
    """Inverse of ``cut_edge``: remove both endpoints and rejoin the edge."""
    if not d.is_broken:
        raise DiagramError("reglue needs a broken diagram")
    p_in, p_out = cut_endpoints(d)
    w = Work(d)
    x = w.slots[(p_in, "p")]
    y = w.slots[(p_out, "p")]
    w.endpoints -= {p_in, p_out}
    w.splice(x, y)
    return w.freeze()


def mirror(d: Diagram) -> Diagram:
    """Flip every crossing: signs negated, over and under exchanged."""
    w = Work(d)
    for c in sort_ids(d.crossings):
        w.flip_crossing(c)
    return w.freeze()


def abstract_graph(d: Diagram):
    """(vertex list, edge -> (start vertex, end vertex)) of the underlying graph."""
    return list(d.vertices), {e: d.edge_ends(e) for e in sort_ids(d.edges)}
