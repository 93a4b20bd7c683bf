import math
import pickle

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from multlattice import (
    LatticeInvariantError,
    LatticeStructureError,
    MultLattice,
    divisor_lattice,
    idempotent_chain,
    validate,
)
from multlattice.constructions import divisors


def lab(L, i):
    return L.labels[i]


def test_d12_products_are_gcd(d12):
    a, b = d12.index("2"), d12.index("3")
    assert lab(d12, d12.mul(a, b)) == "6"
    assert lab(d12, d12.mul(d12.index("4"), d12.index("6"))) == "12"


def test_d12_order_is_reverse_divisibility(d12):
    assert d12.le(d12.index("12"), d12.index("4"))
    assert not d12.le(d12.index("4"), d12.index("6"))
    assert lab(d12, d12.bottom) == "12" and lab(d12, d12.top) == "1"


def test_join_and_meet_are_gcd_and_lcm(d12):
    for x in divisors(12):
        for y in divisors(12):
            i, j = d12.index(str(x)), d12.index(str(y))
            assert lab(d12, d12.join(i, j)) == str(math.gcd(x, y))
            assert lab(d12, d12.meet(i, j)) == str(x * y // math.gcd(x, y))


def test_residual_examples(d12):
    r = lambda q, a: lab(d12, d12.residual(d12.index(q), d12.index(a)))
    assert r("4", "2") == "2"
    assert r("6", "2") == "3"
    assert lab(d12, d12.annihilator(d12.index("2"))) == "6"


def test_radicals(d12):
    assert lab(d12, d12.radical(d12.index("4"))) == "2"
    assert lab(d12, d12.nilradical()) == "6"
    assert lab(d12, d12.jacobson()) == "6"


@pytest.mark.parametrize("n", [1, 2, 12, 36, 60, 210, 360, 900])
def test_radical_two_ways_agree(n):
    L = divisor_lattice(n)
    for a in L.elements:
        assert L.radical_by_powers(a) == L.radical_by_primes(a)


def test_radical_mismatch_raises(d12, monkeypatch):
    monkeypatch.setattr(MultLattice, "radical_by_primes", lambda self, a: self.top)
    with pytest.raises(LatticeInvariantError):
        d12.radical(d12.index("4"))


def test_residual_table_matches_definition(d12):
    R = d12.residual_table
    for q in d12.elements:
        for a in d12.elements:
            under = [x for x in d12.elements if d12.le(d12.mul(a, x), q)]
            assert R[q, a] == d12.join_all(under)


def test_chain_is_idempotent_meet():
    L = idempotent_chain(5)
    assert L.is_totally_ordered()
    for a in L.elements:
        assert L.mul(a, a) == a
        for b in L.elements:
            assert L.mul(a, b) == min(a, b)


def test_maximal_elements(d12):
    assert sorted(lab(d12, m) for m in d12.maximal_elements()) == ["2", "3"]


def test_powers(d12):
    two = d12.index("2")
    assert lab(d12, d12.pow(two, 0)) == "1"
    assert lab(d12, d12.pow(two, 2)) == "4"
    assert lab(d12, d12.pow(two, 5)) == "4"


def test_pickle_roundtrip(d12):
    d12.powers(3)
    L = pickle.loads(pickle.dumps(d12))
    assert L.labels == d12.labels and np.array_equal(L.table, d12.table)
    assert L.pow(L.index("2"), 2) == L.index("4")


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(labels=["a", "a"]),
        dict(table=np.zeros((3, 3), dtype=int)),
        dict(table=np.full((2, 2), 5)),
        dict(bottom=7),
    ],
)
def test_structural_errors(kwargs):
    base = dict(
        labels=["0", "1"],
        order=np.array([[True, True], [False, True]]),
        table=np.array([[0, 0], [0, 1]]),
        bottom=0,
        top=1,
    )
    base.update(kwargs)
    with pytest.raises(LatticeStructureError):
        MultLattice(**base)


def _mutated(L, a, b, value):
    t = L.table.copy()
    t[a, b] = t[b, a] = value
    return MultLattice(L.labels, L.order, t, L.bottom, L.top, name="mutant")


def test_validate_rejects_non_identity(d12):
    bad = _mutated(d12, d12.top, d12.index("2"), d12.index("4"))
    rep = validate(bad)
    assert not rep.ok
    assert "identity" in rep.axioms()


def test_validate_rejects_asymmetric_product(d12):
    t = d12.table.copy()
    a, b = d12.index("2"), d12.index("3")
    t[a, b] = d12.index("12")
    rep = validate(MultLattice(d12.labels, d12.order, t, d12.bottom, d12.top))
    assert rep.axioms()[0] == "commutative"
    name, wit = rep.failures[0]
    assert wit == (a, b)


def test_validate_rejects_non_lattice_order():
    # x, y < u, v (an "M" shape) leaves {x, y} without a least upper bound
    order = np.eye(6, dtype=bool)
    for lo in (0, 1):
        for hi in (2, 3):
            order[lo, hi] = True
    order[4, :] = True
    order[:, 5] = True
    table = np.full((6, 6), 4)
    table[5] = np.arange(6)
    table[:, 5] = np.arange(6)
    rep = validate(MultLattice(["x", "y", "u", "v", "0", "1"], order, table, 4, 5))
    assert "join-exists" in rep.axioms()
    assert "distributive" not in rep.axioms()


@st.composite
def divisor_triples(draw):
    n = draw(st.integers(1, 720))
    L = divisor_lattice(n)
    els = st.integers(0, L.size - 1)
    return L, draw(els), draw(els), draw(els)


@settings(max_examples=200, deadline=None)
@given(divisor_triples())
def test_residuation_adjunction(case):
    L, q, a, x = case
    assert L.le(L.mul(a, x), q) == L.le(x, L.residual(q, a))


@settings(max_examples=200, deadline=None)
@given(divisor_triples())
def test_product_distributes_over_join(case):
    L, a, b, c = case
    assert L.mul(a, L.join(b, c)) == L.join(L.mul(a, b), L.mul(a, c))


@settings(max_examples=200, deadline=None)
@given(divisor_triples())
def test_product_is_below_meet(case):
    L, a, b, _ = case
    assert L.le(L.mul(a, b), L.meet(a, b))


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 3000))
def test_divisor_lattice_validates(n):
    L = divisor_lattice(n)
    assert validate(L).ok
    assert L.size == len(divisors(n))


@settings(max_examples=200, deadline=None)
@given(divisor_triples())
def test_product_is_monotone(case):
    L, a, b, c = case
    if L.le(a, b):
        assert L.le(L.mul(a, c), L.mul(b, c))


@pytest.mark.parametrize("k", [2, 3, 6])
def test_chain_and_products_validate(k):
    from multlattice import product

    assert validate(product([idempotent_chain(k), divisor_lattice(12)])).ok
