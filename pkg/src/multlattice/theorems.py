"""Theorem catalog: each entry re-checks one published statement about
quasi n-absorbing elements exhaustively on a given lattice.

On a lattice that passes :func:`validate` every non-skipped check must come
back without violations; a violation points at a bug in this package.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import config
from . import predicates as P
from .constructions import localize_at_prime, quotient
from .errors import LatticeError
from .lattice import MultLattice

__all__ = ["CATALOG", "TheoremReport", "Violation", "run_all", "run_check"]


@dataclass(frozen=True)
class Violation:
    assignment: tuple[tuple[str, object], ...]
    clause: str

    def describe(self) -> str:
        vals = ", ".join(f"{k}={v}" for k, v in self.assignment)
        return f"{self.clause} [{vals}]"


@dataclass
class TheoremReport:
    id: str
    lattice: str
    checked: int = 0
    violations: list[Violation] = field(default_factory=list)
    skipped: str | None = None
    note: str | None = None
    error: str | None = None

    @property
    def status(self) -> str:
        if self.error is not None:
            return "error"
        if self.skipped is not None:
            return "skipped"
        return "violated" if self.violations else "pass"

    def expect(self, holds: bool, clause: str, **assignment) -> None:
        self.checked += 1
        if not holds:
            self.violations.append(Violation(tuple(assignment.items()), clause))


def _implies(a: bool, b: bool) -> bool:
    return (not a) or b


def _lab(L: MultLattice, x: int) -> str:
    return L.labels[x]


# -- individual checks -------------------------------------------------------


def _check_rel(L, n_max, rep):
    for q in L.proper_elements():
        ql = _lab(L, q)
        rep.expect(P.is_prime(L, q) == P.is_quasi_n_absorbing(L, q, 1), "(1) prime <=> quasi(1)", q=ql)
        rep.expect(
            P.is_weakly_prime(L, q) == P.is_weakly_quasi_n_absorbing(L, q, 1),
            "(2) weakly prime <=> weakly_quasi(1)",
            q=ql,
        )
        for n in range(1, n_max + 1):
            quasi = P.is_quasi_n_absorbing(L, q, n)
            wquasi = P.is_weakly_quasi_n_absorbing(L, q, n)
            rep.expect(
                _implies(P.is_n_absorbing(L, q, n), quasi), "(3) absorbing(n) => quasi(n)", q=ql, n=n
            )
            rep.expect(_implies(quasi, wquasi), "(4) quasi(n) => weakly_quasi(n)", q=ql, n=n)
            for m in range(n + 1, n_max + 2):
                rep.expect(
                    _implies(quasi, P.is_quasi_n_absorbing(L, q, m)),
                    "(5) quasi(n) => quasi(m), m >= n",
                    q=ql, n=n, m=m,
                )
                rep.expect(
                    _implies(wquasi, P.is_weakly_quasi_n_absorbing(L, q, m)),
                    "(6) weakly_quasi(n) => weakly_quasi(m), m >= n",
                    q=ql, n=n, m=m,
                )


def _check_cor1(L, n_max, rep):
    for q in L.proper_elements():
        ql = _lab(L, q)
        prime, wprime = P.is_prime(L, q), P.is_weakly_prime(L, q)
        two = P.is_n_absorbing(L, q, 2) if n_max >= 2 else None
        wtwo = P.is_weakly_n_absorbing(L, q, 2) if n_max >= 2 else None
        for n in range(1, n_max + 2):
            rep.expect(_implies(prime, P.is_quasi_n_absorbing(L, q, n)), "(1) prime => quasi(n)", q=ql, n=n)
            rep.expect(
                _implies(wprime, P.is_weakly_quasi_n_absorbing(L, q, n)),
                "(2) weakly prime => weakly_quasi(n)",
                q=ql, n=n,
            )
            if n >= 2 and two is not None:
                rep.expect(
                    _implies(two, P.is_quasi_n_absorbing(L, q, n)), "(3) 2-absorbing => quasi(n)", q=ql, n=n
                )
                rep.expect(
                    _implies(wtwo, P.is_weakly_quasi_n_absorbing(L, q, n)),
                    "(4) weakly 2-absorbing => weakly_quasi(n)",
                    q=ql, n=n,
                )


def _check_res_char(L, n_max, rep):
    for q in L.proper_elements():
        for n in range(1, n_max + 1):
            rep.expect(
                P.is_quasi_n_absorbing(L, q, n) == P.quasi_by_residuals(L, q, n),
                "quasi(n) <=> (q:a^n) = (q:a^(n-1)) whenever a^n not <= q",
                q=_lab(L, q), n=n,
            )
    if L.is_degenerate:
        return
    z = L.bottom
    for n in range(1, n_max + 1):
        by_ann = all(
            L.pow(a, n) == z or L.annihilator(L.pow(a, n)) == L.annihilator(L.pow(a, n - 1))
            for a in L.compact_elements()
        )
        rep.expect(
            P.is_quasi_n_absorbing(L, z, n) == by_ann,
            "0 quasi(n) <=> a^n = 0 or ann(a^n) = ann(a^(n-1))",
            n=n,
        )


def _check_ann_zero(L, n_max, rep):
    for q in L.proper_elements():
        for n in range(1, n_max + 1):
            if not P.is_weakly_quasi_n_absorbing(L, q, n):
                continue
            for zw in P.find_quasi_n_zeros(L, q, n):
                a, b = zw.elements
                kw = dict(q=_lab(L, q), n=n, a=_lab(L, a), b=_lab(L, b))
                rep.expect(L.mul(L.pow(a, n), q) == L.bottom, "a^n in ann(q)", **kw)
                rep.expect(L.mul(L.pow(b, n), q) == L.bottom, "b^n in ann(q)", **kw)


def _subset_meets(L: MultLattice, gens: list[int]) -> list[int]:
    """Distinct meets of all nonempty subsets of ``gens``."""
    reach: set[int] = set()
    for g in gens:
        reach |= {g} | {L.meet(x, g) for x in reach}
    return sorted(reach)


def _check_prime_meet(L, n_max, rep):
    proper = L.proper_elements()
    primes = [p for p in proper if P.is_prime(L, p)]
    wprimes = [p for p in proper if P.is_weakly_prime(L, p)]
    for q in _subset_meets(L, primes):
        for m in range(2, n_max + 2):
            rep.expect(P.is_quasi_n_absorbing(L, q, m), "(1) meet of primes is quasi(m)", meet=_lab(L, q), m=m)
    for q in _subset_meets(L, wprimes):
        for m in range(2, n_max + 2):
            rep.expect(
                P.is_weakly_quasi_n_absorbing(L, q, m),
                "(2) meet of weakly primes is weakly_quasi(m)",
                meet=_lab(L, q), m=m,
            )


def _check_rad_nil_jac(L, n_max, rep):
    def quasi_all(r: int, what: str, **kw):
        if r == L.top:
            return
        for n in range(2, n_max + 2):
            rep.expect(P.is_quasi_n_absorbing(L, r, n), f"{what} is quasi(n)", n=n, **kw)

    for q in L.proper_elements():
        by_pow, by_prime = L.radical_by_powers(q), L.radical_by_primes(q)
        rep.expect(by_pow == by_prime, "nilpotent join = prime meet", q=_lab(L, q))
        quasi_all(by_prime, "sqrt(q)", q=_lab(L, q), sqrt=_lab(L, by_prime))
    if L.is_degenerate:
        return
    quasi_all(L.nilradical(), "Nil(L)")
    quasi_all(L.jacobson(), "Jac(L)")


def _check_tot_meet(L, n_max, rep):
    if not L.is_totally_ordered():
        rep.skipped = "hypothesis fails: lattice is not totally ordered"
        return
    rep.note = "trivial at finite scale: a finite meet in a chain is one of its members"
    proper = L.proper_elements()
    for m in range(1, n_max + 1):
        for weakly, test in ((False, P.is_quasi_n_absorbing), (True, P.is_weakly_quasi_n_absorbing)):
            family = [q for q in proper if test(L, q, m)]
            clause = "(2) meet of weakly_quasi(m) family" if weakly else "(1) meet of quasi(m) family"
            for q1, q2 in itertools.combinations_with_replacement(family, 2):
                rep.expect(test(L, L.meet(q1, q2), m), clause, q1=_lab(L, q1), q2=_lab(L, q2), m=m)


def _check_fin_meet(L, n_max, rep):
    proper = L.proper_elements()
    for weakly, test in ((False, P.is_quasi_n_absorbing), (True, P.is_weakly_quasi_n_absorbing)):
        deg = {q: P.minimal_quasi_degree(L, q, n_max, weakly=weakly) for q in proper}
        clause = "(2) weakly_quasi(max m_i + 1) of meet" if weakly else "(1) quasi(max m_i + 1) of meet"
        for q1, q2 in itertools.combinations_with_replacement(proper, 2):
            if deg[q1] is None or deg[q2] is None:
                continue
            m = max(deg[q1], deg[q2]) + 1
            rep.expect(
                test(L, L.meet(q1, q2), m), clause,
                q1=_lab(L, q1), q2=_lab(L, q2), m1=deg[q1], m2=deg[q2],
            )


def _check_quot(L, n_max, rep):
    for x in L.proper_elements():
        Q = quotient(L, x)
        pos = {int(v): i for i, v in enumerate(Q.embedding)}
        for q in L.proper_elements():
            if not L.le(x, q):
                continue
            qbar = pos[q]
            for n in range(1, n_max + 1):
                kw = dict(x=_lab(L, x), q=_lab(L, q), n=n)
                rep.expect(
                    _implies(P.is_quasi_n_absorbing(L, q, n), P.is_quasi_n_absorbing(Q, qbar, n)),
                    "(1) quasi(n) in L => quasi(n) in L/x", **kw,
                )
                rep.expect(
                    _implies(P.is_weakly_quasi_n_absorbing(L, q, n), P.is_weakly_quasi_n_absorbing(Q, qbar, n)),
                    "(2) weakly_quasi(n) in L => weakly_quasi(n) in L/x", **kw,
                )


def _check_loc(L, n_max, rep):
    for m in L.maximal_elements():
        Lm = localize_at_prime(L, m)
        for q in L.proper_elements():
            qm = int(Lm.closure[q])
            if qm == Lm.top:
                # q_m = 1_m is not proper, so neither class is defined there
                continue
            for n in range(1, n_max + 1):
                kw = dict(m=_lab(L, m), q=_lab(L, q), q_m=Lm.labels[qm], n=n)
                rep.expect(
                    _implies(P.is_quasi_n_absorbing(L, q, n), P.is_quasi_n_absorbing(Lm, qm, n)),
                    "(1) quasi(n) in L => quasi(n) in L_m", **kw,
                )
                rep.expect(
                    _implies(P.is_weakly_quasi_n_absorbing(L, q, n), P.is_weakly_quasi_n_absorbing(Lm, qm, n)),
                    "(2) weakly_quasi(n) in L => weakly_quasi(n) in L_m", **kw,
                )


def _meet_tuple_condition(L: MultLattice, n: int, scaled: bool) -> bool:
    """For all a_1..a_{n+1}: with a = a_1 ^ ... ^ a_n,
    a^n <= c a_1...a_{n+1}  or  a^(n-1) a_{n+1} <= d a_1...a_{n+1}.

    With ``scaled`` the witnesses c, d range over L; since c*x <= x and the
    product is monotone, c = d = 1 is the extremal choice, so the existential
    collapses to the unscaled inequality.  Both forms therefore evaluate the
    same inequality; the flag only documents which statement is meant.
    """
    dom = np.arange(L.size)
    meets = np.array(L.top, dtype=np.intp)
    prods = np.array(L.top, dtype=np.intp)
    for _ in range(n):
        meets = L.meet_table[meets[..., None], dom]
        prods = L.table[prods[..., None], dom]
    an = L.powers(n)[meets]
    an1 = L.powers(n - 1)[meets]
    for last in dom:
        full = L.table[prods, last]
        ok = L.order[an, full] | L.order[L.table[an1, last], full]
        if not ok.all():
            return False
    return True


def _check_prin_eq(L, n_max, rep):
    if not P.lattice_flags(L).principal_element_lattice:
        rep.skipped = "hypothesis fails: not a principal element lattice"
        return
    s = L.size
    # reach[x, y]: y = c*x for some c
    reach = np.zeros((s, s), dtype=bool)
    for c in range(s):
        reach[np.arange(s), L.table[c]] = True
    dom = np.arange(s)
    for n in range(1, n_max + 1):
        c1 = all(P.is_quasi_n_absorbing(L, q, n) for q in L.proper_elements())
        an, an1 = L.powers(n), L.powers(n - 1)
        anb = L.table[an[:, None], dom]
        an1b = L.table[an1[:, None], dom]
        c2 = bool((reach[anb, an[:, None]] | reach[anb, an1b]).all())
        c3 = _meet_tuple_condition(L, n, scaled=True)
        rep.expect(c1 == c2, "(1) <=> (2)", n=n, c1=c1, c2=c2)
        rep.expect(c2 == c3, "(2) <=> (3)", n=n, c2=c2, c3=c3)


def _check_sprin_eq(L, n_max, rep):
    if not P.lattice_flags(L).principal_element_lattice:
        rep.skipped = "hypothesis fails: not a principal element lattice"
        return
    dom = np.arange(L.size)
    for n in range(1, n_max + 1):
        c1 = all(P.is_strongly_quasi_n_absorbing(L, q, n) for q in L.proper_elements())
        an, an1 = L.powers(n), L.powers(n - 1)
        anb = L.table[an[:, None], dom]
        an1b = L.table[an1[:, None], dom]
        c2 = bool(((an[:, None] == anb) | (an1b == anb)).all())
        c3 = _meet_tuple_condition(L, n, scaled=False)
        rep.expect(c1 == c2, "(1) <=> (2)", n=n, c1=c1, c2=c2)
        rep.expect(c2 == c3, "(2) <=> (3)", n=n, c2=c2, c3=c3)


def _product_index(L: MultLattice) -> dict[tuple[int, ...], int]:
    return {tuple(int(v) for v in row): i for i, row in enumerate(L.coords)}


def _check_prod_1(L, n_max, rep):
    if len(L.factors) < 2:
        rep.skipped = "hypothesis fails: not a product lattice"
        return
    where = _product_index(L)
    tops = [F.top for F in L.factors]
    for i, F in enumerate(L.factors):
        for qi in F.proper_elements():
            coord = list(tops)
            coord[i] = qi
            e = where[tuple(coord)]
            for n in range(1, n_max + 1):
                rep.expect(
                    P.is_quasi_n_absorbing(F, qi, n) == P.is_quasi_n_absorbing(L, e, n),
                    "q_i quasi(n) in L_i <=> (1,..,q_i,..,1) quasi(n) in L",
                    factor=i + 1, q_i=_lab(F, qi), element=_lab(L, e), n=n,
                )


def _check_prod_k(L, n_max, rep):
    if len(L.factors) < 2:
        rep.skipped = "hypothesis fails: not a product lattice"
        return
    where = _product_index(L)
    degrees = [
        {q: P.minimal_quasi_degree(F, q, n_max) for q in F.proper_elements()} for F in L.factors
    ]
    for combo in itertools.product(*(F.proper_elements() for F in L.factors)):
        ns = [d[q] for d, q in zip(degrees, combo)]
        if any(v is None for v in ns):
            continue
        m = max(ns) + 1
        e = where[combo]
        rep.expect(
            P.is_quasi_n_absorbing(L, e, m),
            "(q_1,..,q_k) quasi(max n_i + 1)",
            element=_lab(L, e), degrees=tuple(ns),
        )


def _check_suff(L, n_max, rep):
    for q in L.proper_elements():
        above = np.flatnonzero(L.order[q])
        for n in range(1, n_max + 1):
            strongly = P.is_strongly_quasi_n_absorbing(L, q, n)
            h1 = P._quasi_witness(L, q, n, False, domain=above) is None
            rep.expect(_implies(h1, strongly), "(1) quasi condition above q => strongly_quasi(n)", q=_lab(L, q), n=n)
            if n <= config.ABSORBING_N_CAP:
                h2 = P._absorbing_witness(L, q, n, False, domain=above) is None
                rep.expect(
                    _implies(h2, strongly), "(2) absorbing condition above q => strongly_quasi(n)", q=_lab(L, q), n=n
                )


Check = Callable[[MultLattice, int, TheoremReport], None]

CATALOG: dict[str, tuple[Check, str]] = {
    "REL": (_check_rel, "relations among prime, absorbing and quasi classes"),
    "COR1": (_check_cor1, "prime / 2-absorbing elements are quasi n-absorbing"),
    "RES-CHAR": (_check_res_char, "residual characterization of quasi n-absorbing"),
    "ANN-ZERO": (_check_ann_zero, "quasi n-zeros annihilate q"),
    "PRIME-MEET": (_check_prime_meet, "meets of (weakly) primes"),
    "RAD-NIL-JAC": (_check_rad_nil_jac, "radicals, Nil(L) and Jac(L)"),
    "TOT-MEET": (_check_tot_meet, "meets in totally ordered lattices"),
    "FIN-MEET": (_check_fin_meet, "finite meets raise the degree by one"),
    "QUOT": (_check_quot, "passage to quotients L/x"),
    "LOC": (_check_loc, "localization at maximal elements"),
    "PRIN-EQ": (_check_prin_eq, "principal element lattices: all proper elements quasi"),
    "PROD-1": (_check_prod_1, "(q, 1) in a product"),
    "PROD-K": (_check_prod_k, "componentwise elements of a k-fold product"),
    "SPRIN-EQ": (_check_sprin_eq, "principal element lattices: all proper elements strongly quasi"),
    "SUFF": (_check_suff, "sufficient conditions for strongly quasi"),
}


def run_check(L: MultLattice, theorem_id: str, n_max: int = config.DEFAULT_N_MAX) -> TheoremReport:
    if theorem_id not in CATALOG:
        raise KeyError(f"unknown theorem id {theorem_id!r}")
    if not (1 <= n_max <= config.ABSORBING_N_CAP):
        raise ValueError(f"n_max={n_max} outside 1..{config.ABSORBING_N_CAP}")
    rep = TheoremReport(theorem_id, L.name)
    check, _ = CATALOG[theorem_id]
    try:
        check(L, n_max, rep)
    except LatticeError as exc:
        rep.error = f"{type(exc).__name__}: {exc}"
    return rep


def _run_one(args: tuple[MultLattice, str, int]) -> TheoremReport:
    return run_check(*args)


def run_all(
    L: MultLattice,
    n_max: int = config.DEFAULT_N_MAX,
    ids: list[str] | None = None,
    workers: int = 1,
) -> list[TheoremReport]:
    """Run the catalog (or ``ids``) in catalog order."""
    if ids is None:
        ids = list(CATALOG)
    else:
        unknown = [i for i in ids if i not in CATALOG]
        if unknown:
            raise KeyError(f"unknown theorem id {unknown[0]!r}")
        ids = [i for i in CATALOG if i in set(ids)]
    if workers <= 1 or len(ids) <= 1:
        return [run_check(L, i, n_max) for i in ids]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_run_one, [(L, i, n_max) for i in ids]))
