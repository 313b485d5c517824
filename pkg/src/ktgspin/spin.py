"""Verdicts on the ±1-twist spin of a KTG along one of its edges.

Two independent certificates are available:

* ``knotted_witness``: when the complement of the edge is a single cycle
  with a nontrivial Fox n-coloring, that coloring is lifted to a nontrivial
  associated-quandle coloring of the broken diagram after endpoint descent.
* ``unknotted_witness``: when the complement simplifies to a crossing-free
  diagram, the spin is unknotted.

``classify_spin`` tries them in that order and reports UNKNOWN when neither
applies.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import networkx as nx

from .algebra import associated_quandle, dihedral_gfamily
from .coloring import check_coloring, fox_colorings, is_trivial_coloring, lift_fox_to_spin
from .diagram import (
    Diagram,
    DiagramError,
    constituent_cycles,
    cut_edge,
    extract_subdiagram,
    mirror,
    sort_ids,
)
from .moves import DEFAULT_BUDGET, DescendRecord, SimplificationTrace, mn_endpoint_descend, simplify

KNOTTED = "KNOTTED"
UNKNOTTED = "UNKNOTTED"
UNKNOWN = "UNKNOWN"

RULE_FOX_LIFT = "fox-lift"
RULE_COMPLEMENT_TRIVIAL = "complement-unknotted"
RULE_NONE = "none"

DEFAULT_N_RANGE = tuple(range(2, 14))


class SpinError(ValueError):
    pass


@dataclass
class KnottedWitness:
    n: int
    fox: dict  # arc of the complement knot -> Z/n
    broken: Diagram  # cut and descended diagram carrying the lift
    coloring: dict  # arc of ``broken`` -> (x, g)

    def verify(self) -> list:
        q = associated_quandle(dihedral_gfamily(self.n))
        errs = check_coloring(self.broken, q, self.coloring)
        if is_trivial_coloring(self.coloring):
            errs.append("lifted coloring is trivial")
        return errs


@dataclass
class UnknottedWitness:
    trace: SimplificationTrace
    descent: DescendRecord

    def verify(self) -> list:
        if self.trace.final_crossings != 0:
            return [f"trace ends at {self.trace.final_crossings} crossings"]
        if self.trace.replay().crossing_count != 0:
            return ["trace does not replay to a crossing-free diagram"]
        return []


@dataclass
class SpinCertificate:
    verdict: str
    edge: str
    rule: str
    witness: object = None
    diagnostics: dict = field(default_factory=dict)
    mirror: "SpinCertificate | None" = None

    def lines(self) -> list:
        out = [f"edge {self.edge}: {self.verdict} [{self.rule}]"]
        w = self.witness
        if isinstance(w, KnottedWitness):
            out.append(f"  n={w.n} fox: " + " ".join(f"{a}={w.fox[a]}" for a in sort_ids(w.fox)))
            out.append("  lift: " + " ".join(f"{a}={w.coloring[a][0]}/{w.coloring[a][1]}"
                                            for a in sort_ids(w.coloring)))
        elif isinstance(w, UnknottedWitness):
            if w.descent.changed:
                out.append("  descent: " + " ".join(str(m) for m in w.descent.moves))
            out += ["  " + ln for ln in w.trace.lines()]
        for k in sorted(self.diagnostics):
            out.append(f"  {k}: {self.diagnostics[k]}")
        if self.mirror is not None:
            out.append(f"  mirror: {self.mirror.verdict} [{self.mirror.rule}]")
        return out


def _complement(d: Diagram, e) -> list:
    if d.is_broken:
        raise SpinError("spin classification needs a closed diagram")
    if e not in d.edges:
        raise SpinError(f"unknown edge {e}")
    return [x for x in sort_ids(d.edges) if x != e]


def _is_single_cycle(d: Diagram, keep) -> bool:
    return tuple(keep) in {tuple(c) for c in constituent_cycles(d)}


def fox_profile(k: Diagram, n_range=DEFAULT_N_RANGE) -> dict:
    """n -> number of Fox n-colorings."""
    return {n: fox_colorings(k, n).count for n in n_range}


def knotted_witness(d: Diagram, e, n_range=DEFAULT_N_RANGE, position: int = 0, fox_counts=None):
    """A lifted nontrivial coloring certifying a knotted spin, or ``None``.

    ``fox_counts``, if given, is filled with the Fox counts that were tried.
    """
    keep = _complement(d, e)
    if not keep or not _is_single_cycle(d, keep):
        return None
    b = mn_endpoint_descend(cut_edge(d, e, position))
    knot = extract_subdiagram(b, keep)
    for n in n_range:
        res = fox_colorings(knot, n)
        if fox_counts is not None:
            fox_counts[n] = res.count
        if not res.is_nontrivial:
            continue
        fox = res.nontrivial()
        q = associated_quandle(dihedral_gfamily(n))
        col = lift_fox_to_spin(b, fox, n, q)
        w = KnottedWitness(n, fox, b, col)
        errs = w.verify()
        if errs:
            raise SpinError("lifted coloring failed verification: " + errs[0])
        return w
    return None


def unknotted_witness(d: Diagram, e, budget: int = DEFAULT_BUDGET, position: int = 0, best=None):
    """A simplification of the edge complement to 0 crossings, or ``None``.

    ``best``, if a dict, receives the fewest crossings reached.
    """
    keep = _complement(d, e)
    b, rec = mn_endpoint_descend(cut_edge(d, e, position), record=True)
    if not keep:
        sub = Diagram({}, (), (), {}, {}, "empty")
        trace = SimplificationTrace(sub, [], sub, 0)
    else:
        sub = extract_subdiagram(b, keep)
        trace = simplify(sub, budget)
    if best is not None:
        best["crossings"] = trace.final_crossings
    if trace.final_crossings != 0:
        return None
    return UnknottedWitness(trace, rec)


def _classify_one(d, e, n_range, budget, position) -> SpinCertificate:
    fox_counts = {}
    kw = knotted_witness(d, e, n_range, position, fox_counts)
    diag = {}
    if fox_counts:
        diag["fox counts"] = " ".join(f"{n}:{c}" for n, c in sorted(fox_counts.items()))
    if kw is not None:
        return SpinCertificate(KNOTTED, e, RULE_FOX_LIFT, kw, diag)
    best = {}
    uw = unknotted_witness(d, e, budget, position, best)
    if uw is not None:
        return SpinCertificate(UNKNOTTED, e, RULE_COMPLEMENT_TRIVIAL, uw, diag)
    diag["fewest crossings reached"] = best.get("crossings")
    if not _is_single_cycle(d, _complement(d, e)):
        diag["complement"] = "not a single cycle; Fox rule not applied"
    return SpinCertificate(UNKNOWN, e, RULE_NONE, None, diag)


def classify_spin(d: Diagram, e, n_range=DEFAULT_N_RANGE, budget: int = DEFAULT_BUDGET,
                  position: int = 0, with_mirror: bool = True) -> SpinCertificate:
    """Verdict for the ±1-twist spin of ``d`` along edge ``e``.

    With ``with_mirror`` the mirror image is classified too and attached, so
    both twist directions are backed by a machine-checked certificate.
    """
    _complement(d, e)
    try:
        cert = _classify_one(d, e, n_range, budget, position)
        if with_mirror:
            cert.mirror = _classify_one(mirror(d), e, n_range, budget, position)
    except DiagramError as exc:
        raise SpinError(str(exc)) from exc
    return cert


def all_spins(d: Diagram, n_range=DEFAULT_N_RANGE, budget: int = DEFAULT_BUDGET,
              with_mirror: bool = True) -> list:
    return [classify_spin(d, e, n_range, budget, with_mirror=with_mirror) for e in sort_ids(d.edges)]


# ---------------------------------------------------------------------------
# constituents


@dataclass
class Constituent:
    cycle: tuple
    surface: str  # "sphere" | "torus"
    triviality: str  # "trivial" | "unknown" | "knotted-certified"
    evidence: str = ""


@dataclass
class ConstituentReport:
    edge: str
    entries: list

    def count(self, surface: str) -> int:
        return sum(1 for c in self.entries if c.surface == surface)

    def lines(self) -> list:
        out = []
        for c in self.entries:
            s = f"{'+'.join(c.cycle)}: {c.surface} {c.triviality}"
            if c.evidence:
                s += f" ({c.evidence})"
            out.append(s)
        return out


def is_theta(d: Diagram) -> bool:
    if len(d.vertices) != 2 or len(d.edges) != 3:
        return False
    return all(set(d.edge_ends(e)) == set(d.vertices) for e in d.edges)


def spin_constituents(d: Diagram, e, n_range=DEFAULT_N_RANGE) -> ConstituentReport:
    """Sphere and torus constituents of the spin along ``e``.

    Cycles through ``e`` sweep spheres, the others tori.  For a θ-curve the
    two spheres are unknotted.  Tori are never declared trivial; a torus
    whose core knot has a nontrivial Fox coloring carries that as evidence.
    """
    if d.is_broken:
        raise SpinError("constituents need a closed diagram")
    if e not in d.edges:
        raise SpinError(f"unknown edge {e}")
    theta = is_theta(d)
    entries = []
    for cyc in constituent_cycles(d):
        if e in cyc:
            entries.append(Constituent(tuple(cyc), "sphere", "trivial" if theta else "unknown"))
            continue
        knot = extract_subdiagram(d, cyc)
        evidence = ""
        for n in n_range:
            res = fox_colorings(knot, n)
            if res.is_nontrivial:
                evidence = f"Fox n={n} count {res.count}"
                break
        entries.append(Constituent(tuple(cyc), "torus", "knotted-certified" if evidence else "unknown", evidence))
    return ConstituentReport(e, entries)


# ---------------------------------------------------------------------------
# almost trivial graphs


@dataclass
class AlmostTrivialReport:
    planar: bool
    subgraphs: list  # (kept edges, certified unknotted, fewest crossings)

    @property
    def all_unknotted(self) -> bool:
        return all(ok for _, ok, _ in self.subgraphs)

    @property
    def conclusion(self) -> bool:
        """Planar with every proper subgraph certified: all ±1-twist spins are unknotted,
        provided the graph itself is knotted (not decided here)."""
        return self.planar and self.all_unknotted

    def lines(self) -> list:
        out = [f"planar: {'yes' if self.planar else 'no'}"]
        for keep, ok, n in self.subgraphs:
            out.append(f"{'+'.join(keep)}: {'unknotted' if ok else f'unknown (min {n} crossings)'}")
        if self.conclusion:
            out.append("all proper subgraphs unknotted: every ±1-twist spin is unknotted "
                       "(assuming the graph itself is knotted)")
        return out


def proper_closed_subgraphs(d: Diagram) -> list:
    """Nonempty proper edge subsets that leave no vertex of degree 1."""
    import itertools

    edges = sort_ids(d.edges)
    ends = {e: d.edge_ends(e) for e in edges}
    out = []
    for r in range(len(edges) - 1, 0, -1):
        for keep in itertools.combinations(edges, r):
            deg = {}
            for e in keep:
                for v in ends[e]:
                    if v is not None:
                        deg[v] = deg.get(v, 0) + 1
            if all(k != 1 for k in deg.values()):
                out.append(keep)
    return out


def graph_is_planar(d: Diagram) -> bool:
    g = nx.Graph()
    g.add_nodes_from(d.vertices)
    for e in d.edges:
        a, b = d.edge_ends(e)
        if a is not None and a != b:
            g.add_edge(a, b)
    return nx.check_planarity(g)[0]


def almost_trivial_check(d: Diagram, budget: int = DEFAULT_BUDGET) -> AlmostTrivialReport:
    subs = []
    for keep in proper_closed_subgraphs(d):
        trace = simplify(extract_subdiagram(d, keep), budget)
        subs.append((keep, trace.final_crossings == 0, trace.final_crossings))
    return AlmostTrivialReport(graph_is_planar(d), subs)
