import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from multlattice import (
    CATALOG,
    LatticeInvariantError,
    MultLattice,
    divisor_lattice,
    idempotent_chain,
    localize_at_prime,
    product,
    quotient,
    run_all,
    run_check,
)
from multlattice import predicates as P


def test_catalog_ids():
    assert list(CATALOG) == [
        "REL", "COR1", "RES-CHAR", "ANN-ZERO", "PRIME-MEET", "RAD-NIL-JAC", "TOT-MEET", "FIN-MEET",
        "QUOT", "LOC", "PRIN-EQ", "PROD-1", "PROD-K", "SPRIN-EQ", "SUFF",
    ]


SMALL = [
    lambda: divisor_lattice(12),
    lambda: divisor_lattice(8),
    lambda: divisor_lattice(30),
    lambda: divisor_lattice(72),
    lambda: idempotent_chain(4),
    lambda: product([divisor_lattice(4), divisor_lattice(3)]),
    lambda: product([idempotent_chain(3), divisor_lattice(4)]),
    lambda: quotient(divisor_lattice(36), 8),
    lambda: localize_at_prime(divisor_lattice(60), 1),
]


@pytest.mark.parametrize("build", SMALL)
def test_green_on_small_lattices(build):
    L = build()
    for rep in run_all(L, 3):
        assert rep.status in ("pass", "skipped"), (L.name, rep.id, rep.violations[:3], rep.error)


def test_d12_statuses():
    reps = {r.id: r for r in run_all(divisor_lattice(12), 3)}
    assert len(reps) == 15
    assert reps["TOT-MEET"].status == "skipped"
    assert reps["PROD-1"].status == reps["PROD-K"].status == "skipped"
    assert reps["PRIN-EQ"].status == "pass"
    assert all(r.checked > 0 for r in reps.values() if r.status == "pass")


def test_chain_tot_meet_note():
    rep = run_check(idempotent_chain(3), "TOT-MEET", 2)
    assert rep.status == "pass"
    assert rep.note.startswith("trivial at finite scale")


def test_prin_eq_skips_non_principal_lattice():
    rep = run_check(idempotent_chain(3), "PRIN-EQ", 2)
    assert rep.status == "skipped"


def test_product_checks_run_on_products():
    L = product([divisor_lattice(4), divisor_lattice(9)])
    for tid in ("PROD-1", "PROD-K"):
        rep = run_check(L, tid, 3)
        assert rep.status == "pass" and rep.checked > 0


def test_unknown_id_and_bad_degree():
    with pytest.raises(KeyError):
        run_check(divisor_lattice(4), "NOPE")
    with pytest.raises(KeyError):
        run_all(divisor_lattice(4), ids=["REL", "NOPE"])
    with pytest.raises(ValueError):
        run_check(divisor_lattice(4), "REL", 0)


def test_ids_are_returned_in_catalog_order():
    reps = run_all(divisor_lattice(12), 2, ids=["SUFF", "REL"])
    assert [r.id for r in reps] == ["REL", "SUFF"]


def test_workers_do_not_change_reports():
    L = divisor_lattice(36)
    serial = run_all(L, 2)
    parallel = run_all(L, 2, workers=2)
    assert [(r.id, r.status, r.checked, r.violations) for r in serial] == [
        (r.id, r.status, r.checked, r.violations) for r in parallel
    ]


def test_lattice_errors_are_captured(monkeypatch):
    def boom(self, a):
        raise LatticeInvariantError("injected")

    monkeypatch.setattr(MultLattice, "radical_by_powers", boom)
    rep = run_check(divisor_lattice(12), "RAD-NIL-JAC", 2)
    assert rep.status == "error" and "injected" in rep.error


# -- mutation sensitivity: each check must notice a plausible bug -------------------

_quasi = P.is_quasi_n_absorbing
_strong = P.is_strongly_quasi_n_absorbing


def _patch(monkeypatch, name, fn):
    monkeypatch.setattr(P, name, fn)


MUTATIONS = {
    "REL": (lambda mp: _patch(mp, "is_weakly_quasi_n_absorbing", lambda L, q, n: False), lambda: divisor_lattice(12)),
    "COR1": (
        lambda mp: _patch(mp, "is_quasi_n_absorbing", lambda L, q, n: n == 1 and P.is_prime(L, q)),
        lambda: divisor_lattice(12),
    ),
    "RES-CHAR": (lambda mp: _patch(mp, "quasi_by_residuals", lambda L, q, n: True), lambda: divisor_lattice(12)),
    "ANN-ZERO": (
        lambda mp: _patch(
            mp,
            "find_quasi_n_zeros",
            lambda L, q, n: [P.ZeroWitness("quasi-n-zero", (L.top, L.bottom), n)],
        ),
        lambda: divisor_lattice(12),
    ),
    "PRIME-MEET": (
        lambda mp: _patch(mp, "is_quasi_n_absorbing", lambda L, q, n: P.is_n_absorbing(L, q, min(n, 4))),
        lambda: divisor_lattice(30),
    ),
    "RAD-NIL-JAC": (
        lambda mp: (
            mp.setattr(MultLattice, "radical_by_powers", lambda self, a: a),
            mp.setattr(MultLattice, "radical_by_primes", lambda self, a: a),
        ),
        lambda: divisor_lattice(12),
    ),
    "TOT-MEET": (
        # every chain element is prime, so a wrong meet only shows once the
        # class also excludes where it lands
        lambda mp: (
            mp.setattr(MultLattice, "meet", lambda self, a, b: self.bottom),
            _patch(mp, "is_quasi_n_absorbing", lambda L, q, n: q != L.bottom),
        ),
        lambda: idempotent_chain(4),
    ),
    "FIN-MEET": (
        lambda mp: _patch(mp, "minimal_quasi_degree", lambda L, q, cap, weakly=False: 1),
        lambda: divisor_lattice(8),
    ),
    "QUOT": (
        lambda mp: _patch(mp, "is_quasi_n_absorbing", lambda L, q, n: "/" not in L.name and _quasi(L, q, n)),
        lambda: divisor_lattice(12),
    ),
    "LOC": (
        lambda mp: _patch(mp, "is_quasi_n_absorbing", lambda L, q, n: "_(" not in L.name and _quasi(L, q, n)),
        lambda: divisor_lattice(12),
    ),
    "PRIN-EQ": (lambda mp: _patch(mp, "is_quasi_n_absorbing", lambda L, q, n: True), lambda: divisor_lattice(12)),
    "PROD-1": (
        lambda mp: _patch(mp, "is_quasi_n_absorbing", lambda L, q, n: " x " not in L.name and _quasi(L, q, n)),
        lambda: product([divisor_lattice(4), divisor_lattice(9)]),
    ),
    "PROD-K": (
        lambda mp: _patch(mp, "is_quasi_n_absorbing", lambda L, q, n: " x " not in L.name and _quasi(L, q, n)),
        lambda: product([divisor_lattice(4), divisor_lattice(9)]),
    ),
    "SPRIN-EQ": (
        lambda mp: _patch(mp, "is_strongly_quasi_n_absorbing", lambda L, q, n: True),
        lambda: divisor_lattice(12),
    ),
    "SUFF": (
        lambda mp: _patch(mp, "is_strongly_quasi_n_absorbing", lambda L, q, n: False),
        lambda: divisor_lattice(12),
    ),
}


def test_every_check_has_a_mutation():
    assert set(MUTATIONS) == set(CATALOG)


@pytest.mark.parametrize("tid", list(MUTATIONS))
def test_mutation_is_detected(tid, monkeypatch):
    mutate, build = MUTATIONS[tid]
    L = build()
    assert run_check(L, tid, 3).status == "pass"
    mutate(monkeypatch)
    rep = run_check(build(), tid, 3)
    assert rep.status == "violated", (tid, rep.status, rep.error)
    assert rep.violations[0].describe()


# -- broad sweeps --------------------------------------------------------------------


def test_divisor_sweep_is_green():
    for n in range(2, 201):
        L = divisor_lattice(n)
        for rep in run_all(L, 2):
            assert rep.status in ("pass", "skipped"), (L.name, rep.id, rep.violations[:2], rep.error)


@st.composite
def mixed_lattices(draw):
    parts = draw(
        st.lists(
            st.one_of(st.integers(2, 16).map(divisor_lattice), st.integers(2, 4).map(idempotent_chain)),
            min_size=1,
            max_size=2,
        )
    )
    L = parts[0] if len(parts) == 1 else product(parts)
    how = draw(st.sampled_from(["plain", "quotient", "localize"]))
    if how == "quotient":
        L = quotient(L, draw(st.sampled_from(L.proper_elements())))
    elif how == "localize":
        primes = [p for p in L.proper_elements() if L.prime_mask()[p]]
        L = localize_at_prime(L, draw(st.sampled_from(primes)))
    return L


@settings(max_examples=60, deadline=None)
@given(mixed_lattices())
def test_random_lattices_are_green(L):
    for rep in run_all(L, 2):
        assert rep.status in ("pass", "skipped"), (L.name, rep.id, rep.violations[:2], rep.error)
