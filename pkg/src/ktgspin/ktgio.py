"""The ``ktg v1`` diagram format and the quandle table format.

Diagram grammar (one declaration per line, ``#`` starts a comment)::

    ktg v1
    name <text>                      optional metadata
    source <text>                    optional metadata
    vertex ID (±A ±A ±A)             slots in counterclockwise order;
                                     +A: arc A leaves the vertex, -A: enters
    crossing ID SIGN over(AIN AOUT) under(AIN AOUT)
    endpoint ID (±A)
    edge ID = A1 A2 ... Ak           arcs in orientation order

Every arc is listed in exactly one edge and at its two node slots; an arc
listed in no node declaration is a free loop.  ``serialize`` writes the
canonical form: metadata, then vertices, crossings, endpoints and edges,
each sorted by identifier.
"""

from __future__ import annotations

import os
import re

from .algebra import AlgebraError, FiniteGroup, GFamily, cyclic_group, verify_gfamily, verify_quandle
from .diagram import Diagram, sort_ids, validate

HEADER = "ktg v1"

_ID = r"[A-Za-z_][A-Za-z0-9_.\-]*"
_VERTEX = re.compile(rf"vertex\s+({_ID})\s*\(\s*([+-]{_ID})\s+([+-]{_ID})\s+([+-]{_ID})\s*\)$")
_CROSSING = re.compile(
    rf"crossing\s+({_ID})\s+([+-]?1)\s+over\(\s*({_ID})\s+({_ID})\s*\)\s+under\(\s*({_ID})\s+({_ID})\s*\)$"
)
_ENDPOINT = re.compile(rf"endpoint\s+({_ID})\s*\(\s*([+-]{_ID})\s*\)$")
_EDGE = re.compile(rf"edge\s+({_ID})\s*=\s*((?:{_ID}\s*)+)$")


class ParseError(ValueError):
    def __init__(self, errors):
        self.errors = errors
        super().__init__("; ".join(f"line {n}: {m}" if n else m for n, m in errors))


def parse(text: str) -> Diagram:
    """Parse ``ktg v1`` text; raises ``ParseError`` listing every problem."""
    errors = []
    lines = text.splitlines()
    body = [(i + 1, ln.split("#", 1)[0].strip()) for i, ln in enumerate(lines)]
    body = [(n, ln) for n, ln in body if ln]
    if not body or body[0][1] != HEADER:
        raise ParseError([(body[0][0] if body else 1, f"expected header {HEADER!r}")])
    meta = {}
    crossings, vertices, endpoints = {}, [], []
    ends = {}  # arc -> [tail, head]
    refs = []  # (line, arc) for node references
    edges = {}
    edge_line = {}

    def put(line, arc, which, slot):
        refs.append((line, arc))
        rec = ends.setdefault(arc, [None, None])
        if rec[which] is not None:
            errors.append((line, f"arc {arc}: {'tail' if which == 0 else 'head'} already at {rec[which][0]}"))
        else:
            rec[which] = slot

    node_ids = set()

    def declare(line, ident):
        if ident in node_ids:
            errors.append((line, f"node {ident} declared twice"))
        node_ids.add(ident)

    for n, ln in body[1:]:
        key = ln.split(None, 1)[0]
        if key in ("name", "source"):
            meta[key] = ln.split(None, 1)[1] if " " in ln else ""
            continue
        if key == "vertex":
            m = _VERTEX.match(ln)
            if not m:
                errors.append((n, "malformed vertex declaration"))
                continue
            v = m.group(1)
            declare(n, v)
            vertices.append(v)
            for slot, tok in enumerate(m.groups()[1:]):
                put(n, tok[1:], 0 if tok[0] == "+" else 1, (v, slot))
        elif key == "crossing":
            m = _CROSSING.match(ln)
            if not m:
                errors.append((n, "malformed crossing declaration"))
                continue
            c, sign, oi, oo, ui, uo = m.groups()
            declare(n, c)
            crossings[c] = int(sign)
            put(n, oi, 1, (c, "oi"))
            put(n, oo, 0, (c, "oo"))
            put(n, ui, 1, (c, "ui"))
            put(n, uo, 0, (c, "uo"))
        elif key == "endpoint":
            m = _ENDPOINT.match(ln)
            if not m:
                errors.append((n, "malformed endpoint declaration"))
                continue
            p, tok = m.groups()
            declare(n, p)
            endpoints.append(p)
            put(n, tok[1:], 0 if tok[0] == "+" else 1, (p, "p"))
        elif key == "edge":
            m = _EDGE.match(ln)
            if not m:
                errors.append((n, "malformed edge declaration"))
                continue
            e = m.group(1)
            if e in edges:
                errors.append((n, f"edge {e} declared twice"))
            edges[e] = tuple(m.group(2).split())
            edge_line[e] = n
        else:
            errors.append((n, f"unknown declaration {key!r}"))

    declared = {}
    for e, seq in edges.items():
        for a in seq:
            if a in declared:
                errors.append((edge_line[e], f"arc {a} listed in edges {declared[a]} and {e}"))
            declared[a] = e
    for line, arc in refs:
        if arc not in declared:
            errors.append((line, f"undeclared arc {arc}"))
    for a, rec in ends.items():
        if a in declared and (rec[0] is None) != (rec[1] is None):
            errors.append((edge_line[declared[a]], f"arc {a} has only one end"))
    if errors:
        raise ParseError(sorted(set(errors)))
    arcs = {}
    for a in sort_ids(declared):
        t, h = ends.get(a, [None, None])
        arcs[a] = (t, h)
    d = Diagram(
        crossings={c: crossings[c] for c in sort_ids(crossings)},
        vertices=tuple(sort_ids(vertices)),
        endpoints=tuple(sort_ids(endpoints)),
        arcs=arcs,
        edges={e: edges[e] for e in sort_ids(edges)},
        name=meta.get("name", ""),
    )
    errs = validate(d)
    if errs:
        raise ParseError([(0, x) for x in errs])
    return d


def serialize(d: Diagram, source: str | None = None) -> str:
    """Canonical ``ktg v1`` text for ``d``."""
    sm = d.slot_map

    def tok(node, slot):
        a = sm[(node, slot)]
        return ("+" if d.tail(a) == (node, slot) else "-") + a

    out = [HEADER]
    if d.name:
        out.append(f"name {d.name}")
    if source:
        out.append(f"source {source}")
    for v in sort_ids(d.vertices):
        out.append(f"vertex {v} ({' '.join(tok(v, s) for s in (0, 1, 2))})")
    for c in sort_ids(d.crossings):
        s = "+1" if d.crossings[c] > 0 else "-1"
        out.append(
            f"crossing {c} {s} over({sm[(c, 'oi')]} {sm[(c, 'oo')]}) under({sm[(c, 'ui')]} {sm[(c, 'uo')]})"
        )
    for p in sort_ids(d.endpoints):
        out.append(f"endpoint {p} ({tok(p, 'p')})")
    for e in sort_ids(d.edges):
        out.append(f"edge {e} = {' '.join(d.edges[e])}")
    return "\n".join(out) + "\n"


def read_diagram(path) -> Diagram:
    """Read a ``.ktg`` file; a bare fixture name such as ``trefoil`` loads the bundled copy."""
    if str(path) in CORPUS and not os.path.exists(path):
        return load_corpus(str(path))
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())


# ---------------------------------------------------------------------------
# tables


def _int_rows(lines, count, width, where):
    rows = []
    for _ in range(count):
        if not lines:
            raise AlgebraError(f"{where}: table ends early")
        n, ln = lines.pop(0)
        try:
            row = [int(t) for t in ln.split()]
        except ValueError:
            raise AlgebraError(f"line {n}: expected integers") from None
        if len(row) != width:
            raise AlgebraError(f"line {n}: expected {width} entries, got {len(row)}")
        rows.append(tuple(row))
    return tuple(rows)


def parse_table(text: str):
    """Parse ``quandle m`` or ``gfamily m k`` table text.

    Returns ``("quandle", table)`` or ``("gfamily", GFamily)``.  A G-family
    may give its group as a ``group`` block of k rows; otherwise G = Z/k.
    """
    lines = [(i + 1, ln.split("#", 1)[0].strip()) for i, ln in enumerate(text.splitlines())]
    lines = [(n, ln) for n, ln in lines if ln]
    if not lines:
        raise AlgebraError("empty table file")
    n0, head = lines.pop(0)
    parts = head.split()
    if parts[0] == "quandle" and len(parts) == 2:
        m = int(parts[1])
        return "quandle", _int_rows(lines, m, m, "quandle")
    if parts[0] == "gfamily" and len(parts) == 3:
        m, k = int(parts[1]), int(parts[2])
        group = cyclic_group(k)
        if lines and lines[0][1] == "group":
            lines.pop(0)
            group = FiniteGroup(_int_rows(lines, k, k, "group"), 0, "table")
        ops = tuple(_int_rows(lines, m, m, f"block {g}") for g in range(k))
        return "gfamily", GFamily(m, group, ops, "table")
    raise AlgebraError(f"line {n0}: expected 'quandle m' or 'gfamily m k'")


def table_violations(text: str) -> list:
    kind, obj = parse_table(text)
    if kind == "quandle":
        return verify_quandle(obj)
    return verify_gfamily(obj)


# ---------------------------------------------------------------------------
# bundled fixtures


CORPUS = ("planar-theta", "trefoil", "figure-eight", "kinoshita-theta", "fig5-theta", "granny-theta")


def corpus_path(name: str):
    from importlib.resources import files

    return files("ktgspin") / "corpus" / f"{name}.ktg"


def load_corpus(name: str) -> Diagram:
    if name not in CORPUS:
        raise KeyError(f"no fixture named {name!r}")
    return parse(corpus_path(name).read_text(encoding="utf-8"))
