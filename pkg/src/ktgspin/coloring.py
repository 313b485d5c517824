"""Quandle colorings of KTG diagrams and Fox n-colorings of knot diagrams.

A coloring maps every arc to a pair ``(x, g)`` of the associated quandle of
a G-family.  At a crossing the over arc is unchanged and the under strand
changes from ``a`` to ``a◁b`` when the crossing is positive (the under strand
passes the oriented over strand from its right) and to ``a◁⁻¹b`` otherwise.
At a vertex the three X-components agree and the product of G-components in
clockwise slot order, inverted for arcs leaving the vertex, is the identity.
Slots are stored counterclockwise; for a non-abelian G the direction matters,
and only the clockwise reading is invariant under vertex twists.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd

from .algebra import AssociatedQuandle
from .diagram import Diagram, DiagramError, extract_with_map, cut_edge_of, sort_ids


class ColoringError(ValueError):
    pass


def _clockwise(d: Diagram, v) -> tuple:
    return tuple(reversed(d.node_slots(v)))


def vertex_product(q: AssociatedQuandle, d: Diagram, v, col: dict) -> int:
    """Product of G-components around ``v`` in clockwise slot order, out-arcs inverted."""
    G = q.family.group
    r = G.identity
    for s in _clockwise(d, v):
        a = d.slot_map[(v, s)]
        g = col[a][1]
        if d.tail(a) == (v, s):
            g = G.inv(g)
        r = G.mul[r][g]
    return r


def check_coloring(d: Diagram, q: AssociatedQuandle, col: dict) -> list:
    """Violations of the crossing and vertex rules; empty means valid."""
    missing = [a for a in sort_ids(d.arcs) if a not in col]
    if missing:
        raise ColoringError(f"coloring misses arcs {missing}")
    idx = {a: q.index(*col[a]) for a in d.arcs}
    inv = q.inverse_table
    out = []
    for c in sort_ids(d.crossings):
        oi, oo = d.pass_arcs(c, "o")
        ui, uo = d.pass_arcs(c, "u")
        if idx[oi] != idx[oo]:
            out.append(f"crossing {c}: over arc changes color {col[oi]} -> {col[oo]}")
        t = q.table if d.crossings[c] > 0 else inv
        want = t[idx[ui]][idx[oi]]
        if idx[uo] != want:
            out.append(f"crossing {c}: under-out {col[uo]} != {q.pair(want)}")
    G = q.family.group
    for v in d.vertices:
        arcs = [d.slot_map[(v, s)] for s in d.node_slots(v)]
        xs = {col[a][0] for a in arcs}
        if len(xs) != 1:
            out.append(f"vertex {v}: X-components differ {sorted(xs)}")
        prod = vertex_product(q, d, v, col)
        if prod != G.identity:
            out.append(f"vertex {v}: G-product {prod} is not the identity")
    return out


def is_trivial_coloring(col: dict) -> bool:
    return len({x for x, _ in col.values()}) <= 1


@dataclass
class ColoringResult:
    count: int
    colorings: list = field(default_factory=list)
    truncated: bool = False


def enumerate_colorings(d: Diagram, q: AssociatedQuandle, keep: int = 1000, boundary: dict | None = None) -> ColoringResult:
    """Exact count of colorings by backtracking with crossing propagation.

    Up to ``keep`` colorings are returned in enumeration order.  ``boundary``
    pins chosen arcs to fixed colors.
    """
    arcs = []
    for e in sort_ids(d.edges):
        arcs.extend(d.edges[e])
    pos = {a: i for i, a in enumerate(arcs)}
    n = len(arcs)
    N = q.size
    table = q.table
    inv = q.inverse_table
    k = q.k
    G = q.family.group

    cross = []
    by_arc = [[] for _ in range(n)]
    for c in sort_ids(d.crossings):
        oi, oo = d.pass_arcs(c, "o")
        ui, uo = d.pass_arcs(c, "u")
        pc = d.crossings[c] > 0
        con = ("c", pos[oi], pos[oo], pos[ui], pos[uo], table if pc else inv,
               inv if pc else table)
        cross.append(con)
        for a in (oi, oo, ui, uo):
            by_arc[pos[a]].append(con)
    for v in d.vertices:
        slots = _clockwise(d, v)
        vs = tuple(pos[d.slot_map[(v, s)]] for s in slots)
        outs = tuple(d.tail(d.slot_map[(v, s)]) == (v, s) for s in slots)
        con = ("v", vs, outs)
        for p in set(vs):
            by_arc[p].append(con)

    val = [-1] * n
    trail = []

    def assign(p, x):
        queue = [(p, x)]
        while queue:
            p, x = queue.pop()
            if val[p] >= 0:
                if val[p] != x:
                    return False
                continue
            val[p] = x
            trail.append(p)
            for con in by_arc[p]:
                if con[0] == "c":
                    _, oi, oo, ui, uo, fwd, back = con
                    ov = val[oi] if val[oi] >= 0 else val[oo]
                    if val[oi] >= 0 and val[oo] < 0:
                        queue.append((oo, val[oi]))
                    elif val[oo] >= 0 and val[oi] < 0:
                        queue.append((oi, val[oo]))
                    elif val[oi] >= 0 and val[oo] >= 0 and val[oi] != val[oo]:
                        return False
                    if ov >= 0:
                        if val[ui] >= 0:
                            want = fwd[val[ui]][ov]
                            if val[uo] >= 0:
                                if val[uo] != want:
                                    return False
                            else:
                                queue.append((uo, want))
                        elif val[uo] >= 0:
                            queue.append((ui, back[val[uo]][ov]))
                else:
                    _, vs, outs = con
                    xs = {val[i] // k for i in vs if val[i] >= 0}
                    if len(xs) > 1:
                        return False
                    if all(val[i] >= 0 for i in vs):
                        r = G.identity
                        for i, o in zip(vs, outs):
                            g = val[i] % k
                            r = G.mul[r][G.inv(g) if o else g]
                        if r != G.identity:
                            return False
        return True

    def undo(mark):
        while len(trail) > mark:
            val[trail.pop()] = -1

    result = ColoringResult(0)
    if boundary:
        for a, c in sorted(boundary.items(), key=lambda kv: pos[kv[0]]):
            if not assign(pos[a], q.index(*c)):
                return result

    def rec(start):
        i = start
        while i < n and val[i] >= 0:
            i += 1
        if i == n:
            result.count += 1
            if len(result.colorings) < keep:
                result.colorings.append({a: q.pair(val[pos[a]]) for a in arcs})
            else:
                result.truncated = True
            return
        for x in range(N):
            mark = len(trail)
            if assign(i, x):
                rec(i + 1)
            undo(mark)

    rec(0)
    return result


# ---------------------------------------------------------------------------
# Fox colorings


def _diagonalize(A, ncols):
    """Integer diagonal form D = U A V; returns (diagonal entries, V)."""
    A = [row[:] for row in A]
    m = len(A)
    V = [[int(i == j) for j in range(ncols)] for i in range(ncols)]

    def col_op(i, j, f):  # col_j -= f * col_i
        for r in range(m):
            A[r][j] -= f * A[r][i]
        for r in range(ncols):
            V[r][j] -= f * V[r][i]

    def swap_cols(i, j):
        for r in range(m):
            A[r][i], A[r][j] = A[r][j], A[r][i]
        for r in range(ncols):
            V[r][i], V[r][j] = V[r][j], V[r][i]

    diag = []
    t = 0
    while t < min(m, ncols):
        nz = [(abs(A[r][c]), r, c) for r in range(t, m) for c in range(t, ncols) if A[r][c]]
        if not nz:
            break
        _, r, c = min(nz)
        A[t], A[r] = A[r], A[t]
        swap_cols(t, c)
        while True:
            done = True
            for r in range(t + 1, m):
                if A[r][t]:
                    f = A[r][t] // A[t][t]
                    for cc in range(ncols):
                        A[r][cc] -= f * A[t][cc]
                    if A[r][t]:
                        A[t], A[r] = A[r], A[t]
                        done = False
            for c in range(t + 1, ncols):
                if A[t][c]:
                    f = A[t][c] // A[t][t]
                    col_op(t, c, f)
                    if A[t][c]:
                        swap_cols(t, c)
                        done = False
            if done:
                break
        diag.append(A[t][t])
        t += 1
    return diag, V


@dataclass
class FoxResult:
    n: int
    count: int
    arcs: list
    free_parameters: int
    generators: list

    def nontrivial(self):
        """A non-constant coloring as ``{arc: color}``, or ``None``."""
        for g in self.generators:
            if len(set(g)) > 1:
                return dict(zip(self.arcs, g))
        return None

    @property
    def is_nontrivial(self) -> bool:
        return self.count > self.n


def fox_matrix(k: Diagram):
    arcs = sort_ids(k.arcs)
    pos = {a: i for i, a in enumerate(arcs)}
    rows = []
    for c in sort_ids(k.crossings):
        oi, oo = k.pass_arcs(c, "o")
        ui, uo = k.pass_arcs(c, "u")
        r = [0] * len(arcs)
        r[pos[oi]] += 1
        r[pos[oo]] -= 1
        if any(r):
            rows.append(r)
        r = [0] * len(arcs)
        r[pos[uo]] += 1
        r[pos[ui]] += 1
        r[pos[oi]] -= 2
        if any(r):
            rows.append(r)
    return arcs, rows


def fox_colorings(k: Diagram, n: int) -> FoxResult:
    """Exact number of Fox n-colorings (under-out = 2·over − under-in mod n)."""
    if k.vertices:
        raise DiagramError("Fox colorings need a diagram without vertices")
    if n < 2:
        raise ValueError("n must be >= 2")
    arcs, rows = fox_matrix(k)
    cols = len(arcs)
    diag, V = _diagonalize(rows, cols)
    count = 1
    gens = []
    free = 0
    for i in range(cols):
        d = diag[i] if i < len(diag) else 0
        g = gcd(d, n)
        count *= g
        if g == n:
            free += 1
        if g > 1:
            mult = n // g
            gens.append(tuple((V[r][i] * mult) % n for r in range(cols)))
    return FoxResult(n, count, arcs, free, gens)


# ---------------------------------------------------------------------------


def lift_fox_to_spin(b: Diagram, fox: dict, n: int, q: AssociatedQuandle | None = None) -> dict:
    """Color a broken KTG from a Fox coloring of the complement of its cut edge.

    Arcs of the cut edge are dotted (G-component 0) with the X-value of the
    vertex their terminal segment meets; all other arcs are solid with the
    Fox color of the arc they become in the extracted knot.
    """
    from .algebra import associated_quandle, dihedral_gfamily

    if q is None:
        q = associated_quandle(dihedral_gfamily(n))
    e = cut_edge_of(b)
    keep = [x for x in b.edges if x != e]
    if not keep:
        raise ColoringError("nothing left after removing the cut edge")
    knot, amap = extract_with_map(b, keep)
    if knot.vertices:
        raise ColoringError("complement of the cut edge is not a single cycle")
    missing = [a for a in knot.arcs if a not in fox]
    if missing:
        raise ColoringError(f"Fox coloring misses arcs {sort_ids(missing)}")
    col = {a: (fox[amap[a]] % n, 1) for a in b.arcs if a in amap}

    seq = b.edges[e]
    start, end = b.edge_ends(e)
    if start is None or end is None:
        raise ColoringError("cut edge does not meet a vertex")

    def vertex_x(v):
        for s in b.node_slots(v):
            a = b.slot_map[(v, s)]
            if b.edge_of[a] != e:
                return col[a][0]
        raise ColoringError(f"vertex {v} has no solid neighbour")

    seg = vertex_x(start)
    for a in seq:
        col[a] = (seg, 0)
        h = b.head(a)
        if h[0] in b.endpoints:
            seg = vertex_x(end)
    errs = check_coloring(b, q, col)
    if errs:
        raise ColoringError("lift is not a coloring: " + errs[0])
    return col
