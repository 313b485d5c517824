"""One test per acceptance criterion; each records a PASS/FAIL line shown at the end of the run."""

import io
import itertools
import random
import time
from contextlib import contextmanager

import pytest
from conftest import ACCEPTANCE_LINES

from ktgspin.algebra import associated_quandle, dihedral_gfamily, verify_gfamily, verify_quandle
from ktgspin.cli import run
from ktgspin.coloring import check_coloring, enumerate_colorings, fox_colorings, is_trivial_coloring
from ktgspin.diagram import cut_edge, sort_ids
from ktgspin.ktgio import CORPUS, load_corpus
from ktgspin.moves import MoveError, applicable_moves, apply_move, mn_endpoint_descend, terminal_segments_over
from ktgspin.spin import (
    KNOTTED,
    UNKNOTTED,
    classify_spin,
    is_theta,
    knotted_witness,
    spin_constituents,
    unknotted_witness,
)

from test_coloring import brute_fox


@contextmanager
def criterion(n, title):
    t0 = time.perf_counter()
    detail = {}
    try:
        yield detail
    except BaseException as exc:
        msg = str(exc).splitlines()[0] if str(exc) else type(exc).__name__
        ACCEPTANCE_LINES.append(f"criterion {n}: FAIL {title} ({msg[:120]})")
        raise
    secs = time.perf_counter() - t0
    extra = f"; {detail['info']}" if "info" in detail else ""
    ACCEPTANCE_LINES.append(f"criterion {n}: PASS {title} ({secs:.1f}s{extra})")


def cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = run([str(a) for a in argv], out, err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture(scope="module")
def all_corpus():
    return {name: load_corpus(name) for name in CORPUS}


def corpus_thetas(all_corpus):
    return {name: d for name, d in all_corpus.items() if is_theta(d)}


def test_criterion_01_algebra():
    with criterion(1, "dihedral G-families and associated quandles satisfy the axioms") as info:
        for n in range(2, 8):
            gf = dihedral_gfamily(n)
            assert verify_gfamily(gf) == [], n
            assert verify_quandle(associated_quandle(gf).table) == [], n
        q = associated_quandle(dihedral_gfamily(3))
        pairs = 0
        for a, b in itertools.product(range(q.size), repeat=2):
            (x, eps), (y, g) = q.pair(a), q.pair(b)
            want = ((2 * y - x) % 3, eps) if g == 1 else (x, eps)
            assert q.pair(q.op(a, b)) == want
            pairs += 1
        assert pairs == 36
        info["info"] = "n=2..7, 36 pairs"


def test_criterion_02_fox_oracle(all_corpus):
    with criterion(2, "Fox counts match brute force"):
        t, f8 = all_corpus["trefoil"], all_corpus["figure-eight"]
        assert fox_colorings(t, 3).count == 9 == brute_fox(t, 3)
        assert fox_colorings(f8, 5).count == 25 == brute_fox(f8, 5)


def test_criterion_03_solver_identity(all_corpus, unknot):
    with criterion(3, "quandle count equals Fox count plus n on knots"):
        for k in (unknot, all_corpus["trefoil"], all_corpus["figure-eight"]):
            for n in (2, 3, 5, 7):
                q = associated_quandle(dihedral_gfamily(n))
                assert enumerate_colorings(k, q, keep=0).count == fox_colorings(k, n).count + n


def test_criterion_04_move_invariance(all_corpus):
    with criterion(4, "dihedral-3 counts unchanged under every applicable move") as info:
        q = associated_quandle(dihedral_gfamily(3))
        pairs = 0
        for name, d in all_corpus.items():
            base = enumerate_colorings(d, q, keep=0).count
            for m in applicable_moves(d, kink_arcs=sort_ids(d.arcs)[:1]):
                try:
                    out = apply_move(d, m)
                except MoveError:
                    continue
                assert enumerate_colorings(out, q, keep=0).count == base, f"{name} {m}"
                pairs += 1
        assert pairs >= 50
        info["info"] = f"{pairs} pairs"


def test_criterion_05_granny(all_corpus):
    with criterion(5, "granny theta: KNOTTED on every edge with n=3 witnesses"):
        code, out, _ = cli("spin", "granny-theta", "--all")
        assert code == 0
        assert out.splitlines() == [f"{e}: KNOTTED (n=3)" for e in ("e1", "e2", "e3")]
        d = all_corpus["granny-theta"]
        q = associated_quandle(dihedral_gfamily(3))
        for e in sort_ids(d.edges):
            cert = classify_spin(d, e, with_mirror=False)
            w = cert.witness
            assert check_coloring(w.broken, q, w.coloring) == []
            assert not is_trivial_coloring(w.coloring)


def test_criterion_06_kinoshita(all_corpus):
    with criterion(6, "Kinoshita theta: UNKNOTTED on every edge"):
        code, out, _ = cli("spin", "kinoshita-theta", "--all")
        assert code == 0, out
        assert out.splitlines() == [ln for ln in out.splitlines() if ": UNKNOTTED (" in ln]
        assert len(out.splitlines()) == 3
        d = all_corpus["kinoshita-theta"]
        for e in sort_ids(d.edges):
            cert = classify_spin(d, e, with_mirror=False)
            assert cert.verdict == UNKNOTTED
            assert cert.witness.trace.replay().crossing_count == 0


def test_criterion_07_fig5(all_corpus):
    with criterion(7, "fig5 theta: verdict depends on the cut edge"):
        d = all_corpus["fig5-theta"]
        verdicts = {e: classify_spin(d, e).verdict for e in sort_ids(d.edges)}
        assert verdicts == {"e1": KNOTTED, "e2": UNKNOTTED, "e3": UNKNOTTED}
        w = classify_spin(d, "e1", with_mirror=False).witness
        q = associated_quandle(dihedral_gfamily(w.n))
        assert check_coloring(w.broken, q, w.coloring) == []
        assert not is_trivial_coloring(w.coloring)
        # the cut edge carries the identity, the rest are colored through the knot
        assert {w.coloring[a][1] for a in w.broken.edges["e1"]} == {0}
        assert {w.coloring[a][1] for e in ("e2", "e3") for a in w.broken.edges[e]} == {1}


def test_criterion_08_constituents(all_corpus):
    with criterion(8, "two trivial spheres and one torus for every theta and edge") as info:
        checked = 0
        for name, d in corpus_thetas(all_corpus).items():
            for e in sort_ids(d.edges):
                rep = spin_constituents(d, e, range(2, 6))
                spheres = [c for c in rep.entries if c.surface == "sphere"]
                assert len(spheres) == 2 and rep.count("torus") == 1, (name, e)
                assert all(c.triviality == "trivial" for c in spheres), (name, e)
                checked += 1
        info["info"] = f"{checked} (theta, edge) pairs"


def random_thetas(all_corpus, count, seed=2024):
    rnd = random.Random(seed)
    seeds = list(corpus_thetas(all_corpus).values())
    out = []
    while len(out) < count:
        d = rnd.choice(seeds)
        for _ in range(rnd.randint(1, 3)):
            moves = applicable_moves(d, kink_arcs=[rnd.choice(sort_ids(d.arcs))])
            if not moves:
                break
            try:
                d = apply_move(d, rnd.choice(moves))
            except MoveError:
                continue
        if d.crossing_count <= 9:
            out.append(d)
    return out


def test_criterion_09_soundness(all_corpus):
    with criterion(9, "no edge gets both a KNOTTED and an UNKNOTTED certificate") as info:
        diagrams = list(all_corpus.values()) + random_thetas(all_corpus, 100)
        pairs = 0
        for d in diagrams:
            for e in sort_ids(d.edges):
                kw = knotted_witness(d, e, range(2, 6))
                uw = unknotted_witness(d, e, 40)
                assert kw is None or uw is None, d.name
                pairs += 1
        info["info"] = f"{len(diagrams)} diagrams, {pairs} pairs"


def test_criterion_10_mn_descent(all_corpus):
    with criterion(10, "endpoint descent puts the cut strand over and is idempotent") as info:
        broken = 0
        for name, d in all_corpus.items():
            for e in sort_ids(d.edges):
                for pos in range(len(d.edges[e])):
                    b = mn_endpoint_descend(cut_edge(d, e, pos))
                    assert terminal_segments_over(b) == [], (name, e, pos)
                    assert mn_endpoint_descend(b) == b, (name, e, pos)
                    broken += 1
        info["info"] = f"{broken} broken diagrams"
