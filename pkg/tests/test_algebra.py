import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ktgspin.algebra import (
    AlgebraError,
    FiniteGroup,
    FiniteQuandle,
    GFamily,
    alexander_gfamily,
    associated_quandle,
    conjugation_gfamily,
    cyclic_group,
    dihedral_gfamily,
    family_from_spec,
    multiplicative_group,
    op_inverse,
    symmetric_group_3,
    trivial_quandle,
    verify_gfamily,
    verify_group,
    verify_quandle,
)


def dihedral_table(n):
    return tuple(tuple((2 * y - x) % n for y in range(n)) for x in range(n))


@pytest.mark.parametrize("n", range(2, 9))
def test_dihedral_quandle_axioms(n):
    assert verify_quandle(dihedral_table(n)) == []


def test_non_idempotent_table_is_reported():
    t = ((1, 1), (0, 0))
    errs = verify_quandle(t)
    assert any("idempotence" in e for e in errs)


def test_non_bijective_right_translation_is_reported():
    t = ((0, 0, 0), (1, 1, 0), (2, 2, 2))
    errs = verify_quandle(t)
    assert any("right translation not bijective" in e for e in errs)


def test_non_distributive_table_is_reported():
    # a rack-like table that is idempotent and bijective but not distributive
    t = ((0, 2, 1, 0), (2, 1, 0, 1), (1, 0, 2, 3), (3, 3, 3, 3))
    errs = verify_quandle(t)
    assert errs


def test_finite_quandle_rejects_invalid():
    with pytest.raises(AlgebraError):
        FiniteQuandle(((1, 1), (0, 0)))


def test_table_entries_checked():
    with pytest.raises(AlgebraError):
        verify_quandle(((0, 5), (1, 1)))
    with pytest.raises(AlgebraError):
        verify_quandle(((0, 1),))


def test_op_inverse_matches_inverse_table():
    q = FiniteQuandle(dihedral_table(5))
    inv = q.inverse_table
    for x, y in itertools.product(range(5), repeat=2):
        z = op_inverse(q, x, y)
        assert q.op(z, y) == x
        assert inv[x][y] == z


def test_involutory():
    assert FiniteQuandle(dihedral_table(5)).is_involutory()
    assert trivial_quandle(3).is_involutory()


@pytest.mark.parametrize("k", [1, 2, 3, 6])
def test_cyclic_group(k):
    assert verify_group(cyclic_group(k).mul) == []


def test_symmetric_group_is_nonabelian():
    G = symmetric_group_3()
    assert G.order == 6
    assert any(G.mul[a][b] != G.mul[b][a] for a in range(6) for b in range(6))
    for g in range(6):
        assert G.mul[g][G.inv(g)] == G.identity


def test_bad_group_rejected():
    with pytest.raises(AlgebraError):
        FiniteGroup(((0, 0), (0, 0)), 0)


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_multiplicative_group(p):
    G = multiplicative_group(p)
    assert G.order == p - 1


def test_multiplicative_group_needs_prime():
    with pytest.raises(AlgebraError):
        multiplicative_group(6)


@pytest.mark.parametrize("n", range(2, 8))
def test_dihedral_family_and_associated_quandle(n):
    gf = dihedral_gfamily(n)
    assert verify_gfamily(gf) == []
    q = associated_quandle(gf)
    assert verify_quandle(q.table) == []
    assert q.size == 2 * n


@pytest.mark.parametrize("gf", [conjugation_gfamily(symmetric_group_3()), conjugation_gfamily(cyclic_group(4)),
                                alexander_gfamily(5), alexander_gfamily(7)])
def test_other_families(gf):
    assert verify_gfamily(gf) == []
    assert verify_quandle(associated_quandle(gf).table) == []


def test_associated_operation_formula():
    gf = conjugation_gfamily(symmetric_group_3())
    q = associated_quandle(gf)
    G = gf.group
    for a, b in itertools.product(range(q.size), repeat=2):
        (x, g), (y, h) = q.pair(a), q.pair(b)
        assert q.pair(q.op(a, b)) == (gf.op(h, x, y), G.mul[G.mul[G.inv(h)][g]][h])


def test_each_gfamily_axiom_is_detected():
    G = cyclic_group(2)
    triv = ((0, 0), (1, 1))
    swap = ((1, 1), (0, 0))
    # axiom (i) broken: x◁_1 x != x
    errs = verify_gfamily(GFamily(2, G, (triv, swap)))
    assert any(e.startswith("(i)") for e in errs)
    # axiom (iii) broken: identity acts nontrivially
    refl3 = tuple(tuple((2 * y - x) % 3 for y in range(3)) for x in range(3))
    triv3 = tuple(tuple(x for _ in range(3)) for x in range(3))
    errs = verify_gfamily(GFamily(3, G, (refl3, triv3)))
    assert any(e.startswith("(iii)") for e in errs)
    assert any(e.startswith("(ii)") for e in errs)


def test_distributivity_axiom_detected():
    # involutory right translations fixing y, but not self-distributive
    G = cyclic_group(2)
    triv = tuple(tuple(x for _ in range(4)) for x in range(4))
    odd = ((0, 0, 0, 0), (1, 1, 3, 2), (2, 2, 2, 1), (3, 3, 1, 3))
    errs = verify_gfamily(GFamily(4, G, (triv, odd)))
    assert errs and all(e.startswith("(iv)") for e in errs)


def test_associated_quandle_rejects_bad_family():
    G = cyclic_group(2)
    with pytest.raises(AlgebraError):
        associated_quandle(GFamily(2, G, (((1, 1), (0, 0)), ((0, 0), (1, 1)))))


def test_family_from_spec():
    assert family_from_spec("dihedral:3").m == 3
    assert family_from_spec("conjugation:S3").m == 6
    assert family_from_spec("conjugation:Z/3").group.order == 3
    assert family_from_spec("alexander:5").group.order == 4
    for bad in ("nope:3", "dihedral:x", "conjugation:A5", "alexander:4"):
        with pytest.raises(AlgebraError):
            family_from_spec(bad)


@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=2, max_value=6), st.data())
def test_associated_quandle_right_inverse(n, data):
    q = associated_quandle(dihedral_gfamily(n))
    a = data.draw(st.integers(0, q.size - 1))
    b = data.draw(st.integers(0, q.size - 1))
    assert q.op(q.inverse_table[a][b], b) == a
