"""Evaluate predicate expressions and scan lattice families for elements
that satisfy them, shrinking hits to small instances."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

from sympy import factorint

from .. import predicates as P
from ..constructions import divisor_lattice, idempotent_chain
from ..errors import LatticeInvariantError
from ..lattice import MultLattice
from .parser import And, Atom, Expr, Not, Or, atoms

__all__ = ["FamilySpec", "SearchResult", "eval_atom", "eval_predicate", "search", "shrink"]

FAMILY_KINDS = ("divisor", "chain")


def eval_atom(atom: Atom, L: MultLattice, q: int) -> bool:
    key = ("atom", q, atom)
    if key in L.memo:
        return L.memo[key]
    name, n = atom.name, atom.n
    if name == "prime":
        val = P.is_prime(L, q)
    elif name == "weakly_prime":
        val = P.is_weakly_prime(L, q)
    elif name == "maximal":
        val = P.is_maximal(L, q)
    elif name == "principal":
        val = P.is_principal_element(L, q)
    elif name == "absorbing":
        val = P.is_n_absorbing(L, q, n)
    elif name == "weakly_absorbing":
        val = P.is_weakly_n_absorbing(L, q, n)
    elif name == "quasi":
        val = P.is_quasi_n_absorbing(L, q, n)
    elif name == "weakly_quasi":
        val = P.is_weakly_quasi_n_absorbing(L, q, n)
    elif name == "strongly_quasi":
        val = P.is_strongly_quasi_n_absorbing(L, q, n)
    else:
        raise ValueError(f"unknown atom {name!r}")
    L.memo[key] = val
    return val


def eval_predicate(e: Expr, L: MultLattice, q: int) -> bool:
    """Truth value of ``e`` at the proper element ``q``.  Evaluation is
    short-circuiting, left to right."""
    P._proper(L, q)
    if isinstance(e, Atom):
        return eval_atom(e, L, q)
    if isinstance(e, Not):
        return not eval_predicate(e.operand, L, q)
    if isinstance(e, And):
        return eval_predicate(e.left, L, q) and eval_predicate(e.right, L, q)
    if isinstance(e, Or):
        return eval_predicate(e.left, L, q) or eval_predicate(e.right, L, q)
    raise TypeError(f"not a predicate expression: {e!r}")


@dataclass(frozen=True)
class FamilySpec:
    """Lattices ``kind(p)`` for ``lo <= p <= hi``: divisor lattices D(p) or
    idempotent chains with p elements."""

    kind: str
    lo: int
    hi: int

    def __post_init__(self) -> None:
        if self.kind not in FAMILY_KINDS:
            raise ValueError(f"unknown family {self.kind!r}; expected one of {', '.join(FAMILY_KINDS)}")
        least = 1 if self.kind == "divisor" else 2
        if self.lo < least:
            raise ValueError(f"{self.kind} family parameters start at {least}")
        if self.hi < self.lo:
            raise ValueError("empty parameter range")

    def params(self) -> range:
        return range(self.lo, self.hi + 1)

    def build(self, p: int) -> MultLattice:
        return build_member(self.kind, p)


def build_member(kind: str, p: int) -> MultLattice:
    if kind == "divisor":
        return divisor_lattice(p)
    if kind == "chain":
        return idempotent_chain(p)
    raise ValueError(f"unknown family {kind!r}")


@dataclass(frozen=True)
class SearchResult:
    kind: str
    param: int
    element: str
    snippet: dict[str, bool] = field(default_factory=dict, compare=False)
    shrunk: bool = False
    origin: tuple[int, str] | None = None


def _snippet(e: Expr, L: MultLattice, q: int) -> dict[str, bool]:
    return {str(a): eval_atom(a, L, q) for a in atoms(e)}


def _scan_one(args: tuple[str, int, Expr, int]) -> list[SearchResult]:
    kind, p, e, limit = args
    L = build_member(kind, p)
    hits = []
    for q in L.proper_elements():
        if eval_predicate(e, L, q):
            hits.append(SearchResult(kind, p, L.labels[q], _snippet(e, L, q)))
            if len(hits) >= limit:
                break
    return hits


def _recheck(r: SearchResult, e: Expr) -> None:
    L = build_member(r.kind, r.param)
    if not eval_predicate(e, L, L.index(r.element)):
        raise LatticeInvariantError(f"search hit {r} does not satisfy the predicate on re-evaluation")


def search(family: FamilySpec, e: Expr, limit: int = 1, workers: int = 1) -> list[SearchResult]:
    """First ``limit`` (parameter, element) pairs satisfying ``e``, scanning
    parameters in ascending order and elements in index order.

    The output does not depend on ``workers``.
    """
    if limit < 1:
        raise ValueError("limit must be positive")
    params = list(family.params())
    found: list[SearchResult] = []
    if workers <= 1:
        for p in params:
            found.extend(_scan_one((family.kind, p, e, limit - len(found))))
            if len(found) >= limit:
                break
    else:
        batch = workers * 4
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for start in range(0, len(params), batch):
                chunk = params[start : start + batch]
                for hits in pool.map(_scan_one, [(family.kind, p, e, limit) for p in chunk]):
                    found.extend(hits)
                if len(found) >= limit:
                    break
    found = found[:limit]
    for r in found:
        _recheck(r, e)
    return found


def _divisor_candidates(n: int) -> list[int]:
    """Smaller moduli: drop a whole prime power, then lower one exponent."""
    fac = sorted(factorint(n).items())
    whole = [n // p**k for p, k in fac if k > 1]
    lower = [n // p for p, _ in fac]
    out = []
    for m in whole + lower:
        if m >= 1 and m not in out:
            out.append(m)
    return out


def _holds(kind: str, p: int, label: str, e: Expr) -> bool:
    L = build_member(kind, p)
    try:
        q = L.index(label)
    except KeyError:
        return False
    if q == L.top:
        return False
    return eval_predicate(e, L, q)


def shrink(r: SearchResult, e: Expr) -> SearchResult:
    """Greedy descent to a locally minimal family parameter at which the
    same element label still satisfies ``e``."""
    if not _holds(r.kind, r.param, r.element, e):
        raise ValueError("search result does not satisfy the predicate")
    p = r.param
    while True:
        if r.kind == "divisor":
            cands = _divisor_candidates(p)
        else:
            cands = [p - 1] if p > 2 else []
        nxt = next((m for m in cands if _holds(r.kind, m, r.element, e)), None)
        if nxt is None:
            break
        p = nxt
    if p == r.param:
        return replace(r, shrunk=False)
    L = build_member(r.kind, p)
    q = L.index(r.element)
    return SearchResult(r.kind, p, r.element, _snippet(e, L, q), shrunk=True, origin=(r.param, r.element))
