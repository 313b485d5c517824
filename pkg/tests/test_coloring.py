import itertools

import pytest

from ktgspin.algebra import (
    associated_quandle,
    conjugation_gfamily,
    dihedral_gfamily,
    symmetric_group_3,
)
from ktgspin.build import braid_closure, planar_theta
from ktgspin.coloring import (
    ColoringError,
    check_coloring,
    enumerate_colorings,
    fox_colorings,
    is_trivial_coloring,
    lift_fox_to_spin,
    vertex_product,
)
from ktgspin.diagram import DiagramError, cut_edge, sort_ids
from ktgspin.moves import mn_endpoint_descend


def brute_fox(k, n):
    arcs = sort_ids(k.arcs)
    count = 0
    for vals in itertools.product(range(n), repeat=len(arcs)):
        col = dict(zip(arcs, vals))
        ok = True
        for c in k.crossings:
            oi, oo = k.pass_arcs(c, "o")
            ui, uo = k.pass_arcs(c, "u")
            if col[oi] != col[oo] or (2 * col[oi] - col[ui] - col[uo]) % n:
                ok = False
                break
        count += ok
    return count


def brute_colorings(d, q):
    arcs = sort_ids(d.arcs)
    return sum(
        1
        for vals in itertools.product(range(q.size), repeat=len(arcs))
        if not check_coloring(d, q, {a: q.pair(v) for a, v in zip(arcs, vals)})
    )


@pytest.mark.parametrize("word,strands", [([1, 1, 1], 2), ([1, -2, 1, -2], 3), ([1, 1, 1, 1, 1], 2), ([1, -1], 2)])
@pytest.mark.parametrize("n", [2, 3, 5])
def test_fox_matches_brute_force(word, strands, n):
    k = braid_closure(word, strands)
    if n ** len(k.arcs) > 200_000:
        pytest.skip("oracle too large")
    assert fox_colorings(k, n).count == brute_fox(k, n)


def test_fox_known_values(trefoil, figure_eight):
    assert [fox_colorings(trefoil, n).count for n in (2, 3, 5, 7)] == [2, 9, 5, 7]
    assert [fox_colorings(figure_eight, n).count for n in (2, 3, 5, 7)] == [2, 3, 25, 7]


def test_fox_generators_are_colorings(trefoil):
    res = fox_colorings(trefoil, 9)
    col = res.nontrivial()
    assert col is not None
    for c in trefoil.crossings:
        oi, oo = trefoil.pass_arcs(c, "o")
        ui, uo = trefoil.pass_arcs(c, "u")
        assert col[oi] == col[oo]
        assert (col[ui] + col[uo] - 2 * col[oi]) % 9 == 0


def test_fox_rejects_vertices(theta):
    with pytest.raises(DiagramError):
        fox_colorings(theta, 3)
    with pytest.raises(ValueError):
        fox_colorings(braid_closure([1, 1, 1], 2), 1)


@pytest.mark.parametrize("d", [planar_theta(), braid_closure([1, 1, 1], 2), braid_closure([1, -1], 2)])
def test_enumeration_matches_brute_force_dihedral(d):
    q = associated_quandle(dihedral_gfamily(3))
    assert enumerate_colorings(d, q, keep=0).count == brute_colorings(d, q)


def test_enumeration_matches_brute_force_nonabelian(theta):
    q = associated_quandle(conjugation_gfamily(symmetric_group_3()))
    assert enumerate_colorings(theta, q, keep=0).count == brute_colorings(theta, q)


def test_enumerated_colorings_are_valid(corpus):
    q = associated_quandle(dihedral_gfamily(3))
    for name in ("fig5-theta", "trefoil"):
        d = corpus[name]
        res = enumerate_colorings(d, q, keep=50)
        assert res.colorings
        for col in res.colorings:
            assert check_coloring(d, q, col) == []


def test_keep_truncates():
    q = associated_quandle(dihedral_gfamily(3))
    res = enumerate_colorings(braid_closure([1, 1, 1], 2), q, keep=3)
    assert res.count == 12
    assert len(res.colorings) == 3
    assert res.truncated


def test_boundary_pins_colors(trefoil):
    q = associated_quandle(dihedral_gfamily(3))
    res = enumerate_colorings(trefoil, q, keep=100, boundary={"a1": (2, 1)})
    assert res.count == 3
    assert all(c["a1"] == (2, 1) for c in res.colorings)


def test_theta_vertex_rule_example(theta):
    q = associated_quandle(dihedral_gfamily(3))
    good = {"a1": (1, 1), "a2": (1, 1), "a3": (1, 0)}
    assert check_coloring(theta, q, good) == []
    bad = {"a1": (1, 1), "a2": (1, 0), "a3": (1, 0)}
    assert any("G-product" in e for e in check_coloring(theta, q, bad))
    mixed = {"a1": (1, 1), "a2": (2, 1), "a3": (1, 0)}
    assert any("X-components" in e for e in check_coloring(theta, q, mixed))


def test_theta_colorings_are_trivial(theta):
    q = associated_quandle(dihedral_gfamily(5))
    res = enumerate_colorings(theta, q, keep=1000)
    assert res.count == 5 * 4
    assert all(is_trivial_coloring(c) for c in res.colorings)


def test_vertex_product_orientation(theta):
    q = associated_quandle(conjugation_gfamily(symmetric_group_3()))
    G = q.family.group
    g, h = 1, 3
    col = {"a1": (0, g), "a2": (0, h), "a3": (0, 0)}
    # all three arcs leave v1: product of inverses read clockwise
    expect = G.mul[G.mul[G.inv(0)][G.inv(h)]][G.inv(g)]
    assert vertex_product(q, theta, "v1", col) == expect


def test_missing_arc_in_coloring(theta):
    q = associated_quandle(dihedral_gfamily(3))
    with pytest.raises(ColoringError):
        check_coloring(theta, q, {"a1": (0, 0)})


@pytest.mark.parametrize("n", [2, 3, 5, 7])
def test_solver_identity_on_knots(n, trefoil, figure_eight, unknot):
    q = associated_quandle(dihedral_gfamily(n))
    for k in (unknot, trefoil, figure_eight):
        assert enumerate_colorings(k, q, keep=0).count == fox_colorings(k, n).count + n


def test_lift_on_fig5(corpus):
    d = corpus["fig5-theta"]
    b = mn_endpoint_descend(cut_edge(d, "e1"))
    from ktgspin.diagram import extract_subdiagram

    k = extract_subdiagram(b, ["e2", "e3"])
    fox = fox_colorings(k, 3).nontrivial()
    col = lift_fox_to_spin(b, fox, 3)
    q = associated_quandle(dihedral_gfamily(3))
    assert check_coloring(b, q, col) == []
    assert not is_trivial_coloring(col)
    assert {col[a][1] for a in b.edges["e1"]} == {0}


def test_lift_rejects_incomplete_fox(corpus):
    d = corpus["fig5-theta"]
    b = mn_endpoint_descend(cut_edge(d, "e1"))
    with pytest.raises(ColoringError):
        lift_fox_to_spin(b, {}, 3)
