"""Finite multiplicative lattices: storage, axiom validation and the basic
order/product/residual/radical primitives.

Elements are addressed by their integer index into the carrier.  Labels are
display strings only.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import LatticeAxiomError, LatticeInvariantError, LatticeStructureError

__all__ = [
    "MultLattice",
    "ValidationReport",
    "validate",
]


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of :func:`validate`.

    ``failures`` holds ``(axiom_name, witness)`` pairs where the witness is
    the lexicographically smallest index tuple violating that axiom.
    """

    failures: tuple[tuple[str, tuple[int, ...]], ...] = ()

    @property
    def ok(self) -> bool:
        return not self.failures

    def axioms(self) -> list[str]:
        return [name for name, _ in self.failures]

    def describe(self, labels: Sequence[str] | None = None) -> str:
        if self.ok:
            return "ok"
        parts = []
        for name, wit in self.failures:
            shown = [labels[i] for i in wit] if labels is not None else list(wit)
            parts.append(f"{name} at ({', '.join(map(str, shown))})")
        return "; ".join(parts)


def _bound_table(order: np.ndarray, upper: bool) -> np.ndarray:
    """Least upper (or greatest lower) bounds of all pairs; -1 where missing."""
    s = order.shape[0]
    rel = order if upper else order.T
    # a least bound has the most elements above it among all bounds
    height = rel.sum(axis=1)
    out = np.empty((s, s), dtype=np.intp)
    step = max(1, (1 << 22) // max(1, s * s))
    for lo in range(0, s, step):
        hi = min(s, lo + step)
        # bounds[a, b, u]: u lies above (below) both a and b
        bounds = (rel[lo:hi, None, :] & rel[None, :, :]).reshape(-1, s)
        cand = np.where(bounds, height[None, :], -1).argmax(axis=1)
        least = bounds.any(axis=1) & ~(bounds & ~rel[cand]).any(axis=1)
        out[lo:hi] = np.where(least, cand, -1).reshape(hi - lo, s)
    return out


class MultLattice:
    """A finite lattice with a commutative, associative, join-distributive
    product whose identity is the top element.

    Construction only checks table shapes and index ranges; call
    :func:`validate` (or use :meth:`checked`) to verify the axioms.
    Join and meet are derived from ``order`` and never stored separately.
    """

    def __init__(
        self,
        labels: Sequence[str],
        order,
        table,
        bottom: int,
        top: int,
        name: str = "",
    ) -> None:
        labels = [str(x) for x in labels]
        s = len(labels)
        if s < 1:
            raise LatticeStructureError("a lattice needs at least one element")
        if len(set(labels)) != s:
            seen: set[str] = set()
            dup = next(x for x in labels if x in seen or seen.add(x))
            raise LatticeStructureError(f"duplicate label {dup!r}")
        order = np.array(order, dtype=bool)
        table = np.array(table)
        if order.shape != (s, s):
            raise LatticeStructureError(f"order relation has shape {order.shape}, expected {(s, s)}")
        if table.shape != (s, s):
            raise LatticeStructureError(f"product table has shape {table.shape}, expected {(s, s)}")
        if table.size and not np.issubdtype(table.dtype, np.integer):
            raise LatticeStructureError("product table must hold integer indices")
        table = table.astype(np.intp)
        if table.size and (table.min() < 0 or table.max() >= s):
            bad = tuple(int(i) for i in np.argwhere((table < 0) | (table >= s))[0])
            raise LatticeStructureError(f"product table entry {bad} is out of range")
        for what, idx in (("bottom", bottom), ("top", top)):
            if not (0 <= int(idx) < s):
                raise LatticeStructureError(f"{what} index {idx} is out of range")
        order.setflags(write=False)
        table.setflags(write=False)

        self.name = name
        self.labels: tuple[str, ...] = tuple(labels)
        self.order = order
        self.table = table
        self.bottom = int(bottom)
        self.top = int(top)
        self.join_table = _bound_table(order, upper=True)
        self.meet_table = _bound_table(order, upper=False)
        self.join_table.setflags(write=False)
        self.meet_table.setflags(write=False)
        self._index = {lab: i for i, lab in enumerate(self.labels)}
        self._lock = threading.Lock()
        self._powers: list[np.ndarray] = [np.full(s, self.top, dtype=np.intp)]
        self._residuals: np.ndarray | None = None
        # per-lattice memo for predicate results; see predicates.memoized
        self.memo: dict = {}
        # filled in by constructions that know where the elements came from
        self.factors: tuple[MultLattice, ...] = ()
        self.coords: np.ndarray | None = None
        self.parts: tuple[tuple[str, ...], ...] | None = None
        self.embedding: np.ndarray | None = None
        self.closure: np.ndarray | None = None

    def __getstate__(self) -> dict:
        state = self.__dict__.copy()
        del state["_lock"]
        return state

    def __setstate__(self, state: dict) -> None:
        self.__dict__.update(state)
        self._lock = threading.Lock()

    # -- basics ---------------------------------------------------------

    @property
    def size(self) -> int:
        return len(self.labels)

    def __len__(self) -> int:
        return len(self.labels)

    def __repr__(self) -> str:
        return f"MultLattice({self.name!r}, size={self.size})"

    def checked(self) -> "MultLattice":
        """Return self after validation; raise LatticeAxiomError otherwise."""
        report = validate(self)
        if not report.ok:
            raise LatticeAxiomError(report, self.labels)
        return self

    def index(self, label: str) -> int:
        try:
            return self._index[str(label)]
        except KeyError:
            raise KeyError(f"{self.name or 'lattice'} has no element labelled {label!r}") from None

    def label(self, i: int) -> str:
        return self.labels[i]

    def _check(self, *idx: int) -> None:
        s = self.size
        for i in idx:
            if not (0 <= i < s):
                raise IndexError(f"element index {i} out of range for size {s}")

    @property
    def elements(self) -> range:
        return range(self.size)

    def proper_elements(self) -> list[int]:
        return [i for i in range(self.size) if i != self.top]

    def compact_elements(self) -> np.ndarray:
        # Every element of a finite lattice is compact: a join over any family
        # is already a join over finitely many members.
        return np.arange(self.size)

    @property
    def is_degenerate(self) -> bool:
        return self.size == 1

    # -- order ------------------------------------------------------------

    def le(self, a: int, b: int) -> bool:
        return bool(self.order[a, b])

    def join(self, a: int, b: int) -> int:
        self._check(a, b)
        return int(self.join_table[a, b])

    def meet(self, a: int, b: int) -> int:
        self._check(a, b)
        return int(self.meet_table[a, b])

    def join_all(self, items: Iterable[int]) -> int:
        acc = self.bottom
        for x in items:
            acc = self.join_table[acc, x]
        return int(acc)

    def meet_all(self, items: Iterable[int]) -> int:
        acc = self.top
        for x in items:
            acc = self.meet_table[acc, x]
        return int(acc)

    def is_totally_ordered(self) -> bool:
        return bool((self.order | self.order.T).all())

    def maximal_elements(self) -> list[int]:
        """Proper m with nothing strictly between m and top."""
        out = []
        for m in self.proper_elements():
            above = self.order[m].copy()
            above[m] = above[self.top] = False
            if not above.any():
                out.append(m)
        return out

    # -- product ----------------------------------------------------------

    def mul(self, a: int, b: int) -> int:
        self._check(a, b)
        return int(self.table[a, b])

    def powers(self, k: int) -> np.ndarray:
        """Array whose entry ``a`` is ``a**k``; ``a**0`` is top."""
        if k < 0:
            raise ValueError("exponent must be non-negative")
        with self._lock:
            pw = self._powers
            ar = np.arange(self.size)
            while len(pw) <= k:
                nxt = self.table[ar, pw[-1]]
                nxt.setflags(write=False)
                pw.append(nxt)
            return pw[k]

    def pow(self, a: int, k: int) -> int:
        self._check(a)
        return int(self.powers(k)[a])

    # -- residuation ------------------------------------------------------

    def residual(self, q: int, a: int) -> int:
        """(q : a), the largest x with x*a <= q."""
        self._check(q, a)
        if self._residuals is not None:
            return int(self._residuals[q, a])
        xs = np.flatnonzero(self.order[self.table[:, a], q])
        return self.join_all(xs)

    @property
    def residual_table(self) -> np.ndarray:
        """``residual_table[q, a] == residual(q, a)`` for all pairs."""
        if self._residuals is None:
            s = self.size
            out = np.empty((s, s), dtype=np.intp)
            order_i = self.order.astype(np.int64)
            for q in range(s):
                # mask[a, x]: x*a <= q
                mask = self.order[self.table.T, q]
                below = mask.astype(np.int64) @ order_i  # below[a, y] = #{x in mask : x <= y}
                cand = mask & (below == mask.sum(axis=1, keepdims=True))
                out[q] = cand.argmax(axis=1)
            out.setflags(write=False)
            self._residuals = out
        return self._residuals

    def annihilator(self, a: int) -> int:
        return self.residual(self.bottom, a)

    # -- radicals ---------------------------------------------------------

    def prime_mask(self) -> np.ndarray:
        """Boolean mask of prime elements."""
        key = ("prime_mask",)
        if key not in self.memo:
            le = self.order[:, :]
            mask = np.zeros(self.size, dtype=bool)
            for p in self.proper_elements():
                col = le[:, p]
                bad = col[self.table] & ~col[:, None] & ~col[None, :]
                mask[p] = not bad.any()
            self.memo[key] = mask
        return self.memo[key]

    def radical_by_powers(self, a: int) -> int:
        """Join of all x with some power x**k <= a, 1 <= k <= size."""
        self._check(a)
        hit = np.zeros(self.size, dtype=bool)
        for k in range(1, self.size + 1):
            hit |= self.order[self.powers(k), a]
        return self.join_all(np.flatnonzero(hit))

    def radical_by_primes(self, a: int) -> int:
        """Meet of the primes above a (top if there are none)."""
        self._check(a)
        primes = np.flatnonzero(self.prime_mask() & self.order[a])
        return self.meet_all(primes)

    def radical(self, a: int) -> int:
        by_powers = self.radical_by_powers(a)
        by_primes = self.radical_by_primes(a)
        if by_powers != by_primes:
            raise LatticeInvariantError(
                f"radical of {self.labels[a]}: nilpotent join {self.labels[by_powers]}"
                f" != prime meet {self.labels[by_primes]}"
            )
        return by_powers

    def nilradical(self) -> int:
        return self.radical(self.bottom)

    def jacobson(self) -> int:
        return self.meet_all(self.maximal_elements())


def _first(mask: np.ndarray) -> tuple[int, ...] | None:
    hits = np.argwhere(mask)
    if len(hits) == 0:
        return None
    return tuple(int(i) for i in hits[0])


def validate(L: MultLattice) -> ValidationReport:
    """Check every multiplicative-lattice axiom and report all failures."""
    s = L.size
    le, mul = L.order, L.table
    idx = np.arange(s)
    failures: list[tuple[str, tuple[int, ...]]] = []

    def check(name: str, bad: np.ndarray) -> bool:
        wit = _first(bad)
        if wit is not None:
            failures.append((name, wit))
        return wit is None

    def check_triples(name: str, bad_rows) -> bool:
        # bad_rows(a) -> mask over (a, b, c) for the index block a; blocks keep memory O(s^2)
        step = max(1, (1 << 22) // max(1, s * s))
        for lo in range(0, s, step):
            wit = _first(bad_rows(idx[lo : lo + step]))
            if wit is not None:
                failures.append((name, (wit[0] + lo, *wit[1:])))
                return False
        return True

    order_ok = check("reflexive", ~le[idx, idx])
    order_ok &= check("antisymmetric", le & le.T & (idx[:, None] != idx[None, :]))
    order_ok &= check_triples("transitive", lambda a: le[a][:, :, None] & le[None, :, :] & ~le[a][:, None, :])
    order_ok &= check("bottom-least", ~le[L.bottom])
    order_ok &= check("top-greatest", ~le[:, L.top])
    lattice_ok = check("join-exists", L.join_table < 0)
    lattice_ok &= check("meet-exists", L.meet_table < 0)

    check("commutative", mul != mul.T)
    check_triples("associative", lambda a: mul[mul[a][:, :, None], idx] != mul[a[:, None, None], mul[None, :, :]])
    check("identity", mul[:, L.top] != idx)
    check("zero", mul[:, L.bottom] != L.bottom)
    if order_ok and lattice_ok:
        jn = L.join_table
        check_triples(
            "distributive",
            lambda a: mul[a[:, None, None], jn[None, :, :]] != jn[mul[a][:, :, None], mul[a][:, None, :]],
        )
    return ValidationReport(tuple(failures))
