"""Element classes decided by exhaustive quantification over the carrier.

Each class comes as a pair: ``*_witness`` returns the lexicographically
first counterexample (as element indices) or ``None``, and ``is_*`` is its
boolean form.  Results are memoized on the lattice.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import config
from .errors import CapExceededError, ImproperElementError
from .lattice import MultLattice

Witness = tuple[int, ...]

__all__ = [
    "Classification",
    "LatticeFlags",
    "ZeroWitness",
    "classify",
    "find_quasi_n_zeros",
    "find_triple_zeros",
    "is_maximal",
    "is_n_absorbing",
    "is_prime",
    "is_principal_element",
    "is_quasi_n_absorbing",
    "is_strongly_quasi_n_absorbing",
    "is_weakly_n_absorbing",
    "is_weakly_prime",
    "is_weakly_quasi_n_absorbing",
    "lattice_flags",
    "minimal_quasi_degree",
    "quasi_by_residuals",
]


def _memo(L: MultLattice, key: tuple, compute: Callable[[], object]):
    try:
        return L.memo[key]
    except KeyError:
        val = L.memo[key] = compute()
        return val


def _first(mask: np.ndarray) -> Witness | None:
    hits = np.argwhere(mask)
    if len(hits) == 0:
        return None
    return tuple(int(i) for i in hits[0])


def _proper(L: MultLattice, q: int) -> None:
    L._check(q)
    if q == L.top:
        raise ImproperElementError(f"{L.labels[q]} is the top element of {L.name}, not a proper element")


def _degree(n: int, cap: int) -> None:
    if not (1 <= n <= cap):
        raise CapExceededError(f"degree n={n} outside the supported range 1..{cap}")


# -- prime / weakly prime / maximal ------------------------------------------


def _prime_witness(L: MultLattice, q: int, weakly: bool) -> Witness | None:
    le = L.order[:, q]
    bad = le[L.table] & ~le[:, None] & ~le[None, :]
    if weakly:
        bad &= L.table != L.bottom
    return _first(bad)


def prime_witness(L: MultLattice, q: int) -> Witness | None:
    """First (a, b) with ab <= q, a not <= q, b not <= q."""
    _proper(L, q)
    return _memo(L, ("prime", q), lambda: _prime_witness(L, q, False))


def weakly_prime_witness(L: MultLattice, q: int) -> Witness | None:
    _proper(L, q)
    return _memo(L, ("weakly_prime", q), lambda: _prime_witness(L, q, True))


def is_prime(L: MultLattice, q: int) -> bool:
    return prime_witness(L, q) is None


def is_weakly_prime(L: MultLattice, q: int) -> bool:
    return weakly_prime_witness(L, q) is None


def maximal_witness(L: MultLattice, q: int) -> Witness | None:
    """First x with q < x < 1."""
    _proper(L, q)
    between = L.order[q].copy()
    between[q] = between[L.top] = False
    return _first(between)


def is_maximal(L: MultLattice, q: int) -> bool:
    return maximal_witness(L, q) is None


# -- n-absorbing ----------------------------------------------------------------


def _tuple_products(L: MultLattice, dom: np.ndarray, k: int) -> np.ndarray:
    """Array of shape (len(dom),)*k holding the product of each k-tuple."""
    out = np.array(L.top, dtype=np.intp)
    for _ in range(k):
        out = L.table[out[..., None], dom]
    return out


def _absorbing_witness(
    L: MultLattice, q: int, n: int, weakly: bool, domain: np.ndarray | None = None
) -> Witness | None:
    dom = np.arange(L.size) if domain is None else np.asarray(domain, dtype=np.intp)
    le = L.order[:, q]
    rest = _tuple_products(L, dom, n)  # product of coordinates 1..n
    rest_short = _tuple_products(L, dom, n - 1)
    rest_le = le[rest]
    for a0 in dom:
        row = L.table[a0]
        row_le = le[row]
        # the full (n+1)-fold product lies under q ...
        bad = row_le[rest]
        if weakly:
            bad &= row[rest] != L.bottom
        if not bad.any():
            continue
        # ... but no n-fold subproduct does
        bad &= ~rest_le
        for j in range(n):
            bad &= ~row_le[np.expand_dims(rest_short, j)]
        wit = _first(bad)
        if wit is not None:
            return (int(a0), *(int(dom[i]) for i in wit))
    return None


def absorbing_witness(L: MultLattice, q: int, n: int) -> Witness | None:
    """First (n+1)-tuple with product under q but no n-fold subproduct under q."""
    _proper(L, q)
    _degree(n, config.ABSORBING_N_CAP)
    return _memo(L, ("absorbing", q, n), lambda: _absorbing_witness(L, q, n, False))


def weakly_absorbing_witness(L: MultLattice, q: int, n: int) -> Witness | None:
    _proper(L, q)
    _degree(n, config.ABSORBING_N_CAP)
    return _memo(L, ("weakly_absorbing", q, n), lambda: _absorbing_witness(L, q, n, True))


def is_n_absorbing(L: MultLattice, q: int, n: int) -> bool:
    return absorbing_witness(L, q, n) is None


def is_weakly_n_absorbing(L: MultLattice, q: int, n: int) -> bool:
    return weakly_absorbing_witness(L, q, n) is None


# -- quasi n-absorbing ----------------------------------------------------------


def _quasi_witness(
    L: MultLattice, q: int, n: int, weakly: bool, domain: np.ndarray | None = None
) -> Witness | None:
    dom = L.compact_elements() if domain is None else np.asarray(domain, dtype=np.intp)
    le = L.order[:, q]
    an = L.powers(n)[dom]
    an1 = L.powers(n - 1)[dom]
    anb = L.table[an[:, None], dom[None, :]]
    an1b = L.table[an1[:, None], dom[None, :]]
    bad = le[anb] & ~le[an][:, None] & ~le[an1b]
    if weakly:
        bad &= anb != L.bottom
    wit = _first(bad)
    return None if wit is None else tuple(int(dom[i]) for i in wit)


def quasi_witness(L: MultLattice, q: int, n: int) -> Witness | None:
    """First (a, b) with a^n b <= q while neither a^n nor a^(n-1) b is."""
    _proper(L, q)
    _degree(n, config.QUASI_N_CAP + 1)
    return _memo(L, ("quasi", q, n), lambda: _quasi_witness(L, q, n, False))


def weakly_quasi_witness(L: MultLattice, q: int, n: int) -> Witness | None:
    _proper(L, q)
    _degree(n, config.QUASI_N_CAP + 1)
    return _memo(L, ("weakly_quasi", q, n), lambda: _quasi_witness(L, q, n, True))


def is_quasi_n_absorbing(L: MultLattice, q: int, n: int) -> bool:
    return quasi_witness(L, q, n) is None


def is_weakly_quasi_n_absorbing(L: MultLattice, q: int, n: int) -> bool:
    return weakly_quasi_witness(L, q, n) is None


def strongly_quasi_witness(L: MultLattice, q: int, n: int) -> Witness | None:
    """Same condition as :func:`quasi_witness` with a, b ranging over every
    element rather than the compact ones.

    Written as a plain loop so that it also serves as an independent check
    of the vectorised quasi test.
    """
    _proper(L, q)
    _degree(n, config.QUASI_N_CAP + 1)

    def scan() -> Witness | None:
        for a in range(L.size):
            an, an1 = L.pow(a, n), L.pow(a, n - 1)
            if L.le(an, q):
                continue
            for b in range(L.size):
                if L.le(L.mul(an, b), q) and not L.le(L.mul(an1, b), q):
                    return (a, b)
        return None

    return _memo(L, ("strongly_quasi", q, n), scan)


def is_strongly_quasi_n_absorbing(L: MultLattice, q: int, n: int) -> bool:
    return strongly_quasi_witness(L, q, n) is None


def quasi_by_residuals(L: MultLattice, q: int, n: int) -> bool:
    """Quasi n-absorbing via residuals: (q : a^n) == (q : a^(n-1)) for every
    a with a^n not <= q."""
    _proper(L, q)
    res = L.residual_table
    an, an1 = L.powers(n), L.powers(n - 1)
    live = ~L.order[an, q]
    return bool((res[q, an[live]] == res[q, an1[live]]).all())


def minimal_quasi_degree(L: MultLattice, q: int, cap: int, weakly: bool = False) -> int | None:
    """Smallest n <= cap with q (weakly) quasi n-absorbing, else None."""
    test = is_weakly_quasi_n_absorbing if weakly else is_quasi_n_absorbing
    for n in range(1, cap + 1):
        if test(L, q, n):
            return n
    return None


# -- zero witnesses ----------------------------------------------------------------


@dataclass(frozen=True)
class ZeroWitness:
    """A triple zero (a, b, c) or a quasi n-zero (a, b) of some element q."""

    kind: str  # "triple-zero" or "quasi-n-zero"
    elements: Witness
    n: int | None = None


def find_quasi_n_zeros(L: MultLattice, q: int, n: int) -> list[ZeroWitness]:
    """All (a, b) with a^n b = 0, a^n not <= q and a^(n-1) b not <= q."""
    _proper(L, q)
    le = L.order[:, q]
    an, an1 = L.powers(n), L.powers(n - 1)
    zero = L.table[an[:, None], np.arange(L.size)] == L.bottom
    mask = zero & ~le[an][:, None] & ~le[L.table[an1]]
    return [ZeroWitness("quasi-n-zero", (int(a), int(b)), n) for a, b in np.argwhere(mask)]


def find_triple_zeros(L: MultLattice, q: int) -> list[ZeroWitness]:
    """All index-sorted (a, b, c) with abc = 0 and no pairwise product under q."""
    _proper(L, q)
    le = L.order[:, q]
    mul = L.table
    ab = mul[:, :, None]
    ac = mul[:, None, :]
    bc = mul[None, :, :]
    abc = mul[ab, np.arange(L.size)[None, None, :]]
    idx = np.arange(L.size)
    sorted_ = (idx[:, None, None] <= idx[None, :, None]) & (idx[None, :, None] <= idx[None, None, :])
    mask = (abc == L.bottom) & ~le[ab] & ~le[ac] & ~le[bc] & sorted_
    return [ZeroWitness("triple-zero", tuple(int(v) for v in t)) for t in np.argwhere(mask)]


# -- principal elements and whole-lattice flags ----------------------------------


def principal_witness(L: MultLattice, e: int) -> tuple[str, int, int] | None:
    """First (identity, a, b) breaking  a ^ be = ((a:e) ^ b)e  ("meet") or
    (ae v b):e = (b:e) v a  ("join")."""
    L._check(e)

    def scan():
        res = L.residual_table
        mul, jn, mt = L.table, L.join_table, L.meet_table
        idx = np.arange(L.size)
        a, b = idx[:, None], idx[None, :]
        lhs = mt[a, mul[b, e]]
        rhs = mul[mt[res[a, e], b], e]
        wit = _first(lhs != rhs)
        if wit is not None:
            return ("meet", *wit)
        lhs = res[jn[mul[a, e], b], e]
        rhs = jn[res[b, e], a]
        wit = _first(lhs != rhs)
        if wit is not None:
            return ("join", *wit)
        return None

    return _memo(L, ("principal", e), scan)


def is_principal_element(L: MultLattice, e: int) -> bool:
    return principal_witness(L, e) is None


@dataclass
class LatticeFlags:
    domain: bool
    field: bool
    quasi_local: bool
    totally_ordered: bool
    principal_element_lattice: bool
    witnesses: dict[str, Witness] = field(default_factory=dict)

    def as_dict(self) -> dict[str, bool]:
        return {
            "domain": self.domain,
            "field": self.field,
            "quasi_local": self.quasi_local,
            "totally_ordered": self.totally_ordered,
            "principal_element_lattice": self.principal_element_lattice,
        }


def lattice_flags(L: MultLattice) -> LatticeFlags:
    def compute() -> LatticeFlags:
        wit: dict[str, Witness] = {}
        if L.is_degenerate:
            domain = False
            wit["domain"] = (L.bottom,)
        else:
            w = prime_witness(L, L.bottom)
            domain = w is None
            if w is not None:
                wit["domain"] = w
        field_ = L.size == 2
        if not field_:
            others = [x for x in range(L.size) if x not in (L.bottom, L.top)]
            wit["field"] = (others[0],) if others else ()
        maxes = L.maximal_elements()
        quasi_local = len(maxes) == 1
        if not quasi_local:
            wit["quasi_local"] = tuple(maxes)
        inc = _first(~(L.order | L.order.T))
        if inc is not None:
            wit["totally_ordered"] = inc
        bad = next((e for e in range(L.size) if not is_principal_element(L, e)), None)
        if bad is not None:
            wit["principal_element_lattice"] = (bad,)
        return LatticeFlags(domain, field_, quasi_local, inc is None, bad is None, wit)

    return _memo(L, ("flags",), compute)


# -- classification -------------------------------------------------------------


@dataclass
class Classification:
    """Every predicate outcome for one proper element; list entries are
    indexed by n - 1."""

    element: int
    label: str
    prime: bool
    weakly_prime: bool
    maximal: bool
    principal: bool
    absorbing: list[bool]
    weakly_absorbing: list[bool]
    quasi: list[bool]
    weakly_quasi: list[bool]
    strongly_quasi: list[bool]
    witnesses: dict[str, tuple] = field(default_factory=dict)

    @property
    def n_max(self) -> int:
        return len(self.quasi)


def classify(L: MultLattice, n_max: int = config.DEFAULT_N_MAX) -> list[Classification]:
    """One record per proper element, in index order."""
    if not (1 <= n_max <= config.ABSORBING_N_CAP):
        raise CapExceededError(f"n_max={n_max} outside 1..{config.ABSORBING_N_CAP}")
    rows = []
    for q in L.proper_elements():
        wits: dict[str, tuple] = {}

        def record(name: str, wit) -> bool:
            if wit is not None:
                wits[name] = wit
            return wit is None

        row = Classification(
            element=q,
            label=L.labels[q],
            prime=record("prime", prime_witness(L, q)),
            weakly_prime=record("weakly_prime", weakly_prime_witness(L, q)),
            maximal=record("maximal", maximal_witness(L, q)),
            principal=record("principal", principal_witness(L, q)),
            absorbing=[],
            weakly_absorbing=[],
            quasi=[],
            weakly_quasi=[],
            strongly_quasi=[],
            witnesses=wits,
        )
        for n in range(1, n_max + 1):
            row.absorbing.append(record(f"absorbing({n})", absorbing_witness(L, q, n)))
            row.weakly_absorbing.append(
                record(f"weakly_absorbing({n})", weakly_absorbing_witness(L, q, n))
            )
            row.quasi.append(record(f"quasi({n})", quasi_witness(L, q, n)))
            row.weakly_quasi.append(record(f"weakly_quasi({n})", weakly_quasi_witness(L, q, n)))
            row.strongly_quasi.append(
                record(f"strongly_quasi({n})", strongly_quasi_witness(L, q, n))
            )
        rows.append(row)
    return rows
