"""Concrete multiplicative lattices.

Every constructor returns a validated lattice; a validation failure here
would be a bug and raises :class:`LatticeAxiomError`.
"""

from __future__ import annotations

import itertools
from math import gcd, prod
from typing import Iterable, Sequence

import numpy as np
from sympy import factorint

from . import config
from .errors import CapExceededError, ImproperElementError, LatticeInvariantError
from .lattice import MultLattice

__all__ = [
    "divisor_lattice",
    "idempotent_chain",
    "product",
    "quotient",
    "localize",
    "localize_at_prime",
    "prime_complement",
]


def _cap(cap: int | None) -> int:
    return config.size_cap() if cap is None else cap


def divisors(n: int) -> list[int]:
    divs = [1]
    for p, e in sorted(factorint(n).items()):
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return sorted(divs)


def divisor_lattice(n: int, cap: int | None = None) -> MultLattice:
    """Ideal lattice of Z_n, realised on the divisors of ``n``.

    The divisor ``d`` stands for the ideal dZ_n, so the order is reverse
    divisibility, join is gcd, meet is lcm and ``d*e = gcd(d*e, n)``.
    Elements are listed in increasing numeric order.
    """
    if n < 1:
        raise ValueError(f"divisor lattice needs n >= 1, got {n}")
    count = prod(e + 1 for e in factorint(n).values())
    if count > _cap(cap):
        raise CapExceededError(f"D({n}) has {count} elements, cap is {_cap(cap)}")
    divs = divisors(n)
    pos = {d: i for i, d in enumerate(divs)}
    arr = np.array(divs, dtype=np.int64)
    order = (arr[:, None] % arr[None, :]) == 0
    table = np.array([[pos[gcd(d * e, n)] for e in divs] for d in divs], dtype=np.intp)
    L = MultLattice(
        [str(d) for d in divs], order, table, bottom=pos[n], top=pos[1], name=f"D({n})"
    )
    return L.checked()


def idempotent_chain(k: int) -> MultLattice:
    """Chain 0 < a1 < ... < a(k-2) < 1 whose product is the meet."""
    if k < 2:
        raise ValueError(f"an idempotent chain needs at least 2 elements, got {k}")
    labels = ["0"] + [f"a{i}" for i in range(1, k - 1)] + ["1"]
    idx = np.arange(k)
    order = idx[:, None] <= idx[None, :]
    table = np.minimum(idx[:, None], idx[None, :])
    return MultLattice(labels, order, table, bottom=0, top=k - 1, name=f"chain({k})").checked()


def _parts(L: MultLattice) -> tuple[tuple[str, ...], ...]:
    return L.parts if L.parts is not None else tuple((lab,) for lab in L.labels)


def _flat_factors(L: MultLattice) -> tuple[MultLattice, ...]:
    return L.factors if L.factors else (L,)


def _flat_coords(L: MultLattice) -> np.ndarray:
    return L.coords if L.coords is not None else np.arange(L.size)[:, None]


def product(factors: Sequence[MultLattice], cap: int | None = None) -> MultLattice:
    """Direct product with componentwise order and product.

    Elements are enumerated in row-major order of the factor indices.
    Nested products are flattened, so ``product([product([A, B]), C])`` has
    the same labels and factor list as ``product([A, B, C])``.
    """
    if len(factors) < 2:
        raise ValueError("a product needs at least two factors")
    total = prod(F.size for F in factors)
    if total > _cap(cap):
        raise CapExceededError(f"product has {total} elements, cap is {_cap(cap)}")
    for F in factors:
        F.checked()

    sizes = [F.size for F in factors]
    combos = np.array(list(itertools.product(*(range(s) for s in sizes))), dtype=np.intp)
    strides = np.array([prod(sizes[i + 1 :]) for i in range(len(sizes))], dtype=np.intp)

    order = np.ones((total, total), dtype=bool)
    table = np.zeros((total, total), dtype=np.intp)
    for f, F in enumerate(factors):
        col = combos[:, f]
        order &= F.order[col[:, None], col[None, :]]
        table += F.table[col[:, None], col[None, :]] * strides[f]

    bottom = int(sum(F.bottom * st for F, st in zip(factors, strides)))
    top = int(sum(F.top * st for F, st in zip(factors, strides)))

    factor_parts = [_parts(F) for F in factors]
    parts = tuple(
        tuple(itertools.chain.from_iterable(fp[i] for fp, i in zip(factor_parts, row)))
        for row in combos
    )
    labels = ["(" + ",".join(p) + ")" for p in parts]
    name = " x ".join(F.name for F in factors)

    L = MultLattice(labels, order, table, bottom=bottom, top=top, name=name)
    flat: list[MultLattice] = []
    coord_cols = []
    for f, F in enumerate(factors):
        sub = _flat_coords(F)
        flat.extend(_flat_factors(F))
        coord_cols.append(sub[combos[:, f]])
    L.factors = tuple(flat)
    L.coords = np.concatenate(coord_cols, axis=1)
    L.parts = parts
    return L.checked()


def quotient(L: MultLattice, x: int) -> MultLattice:
    """The interval [x, 1] with product ``a o b = ab v x``.

    ``result.embedding[i]`` is the index in ``L`` of the i-th element.
    """
    if x == L.top:
        raise ImproperElementError("cannot take the quotient by the top element")
    carrier = np.flatnonzero(L.order[x])
    pos = np.full(L.size, -1, dtype=np.intp)
    pos[carrier] = np.arange(len(carrier))
    prods = L.join_table[L.table[carrier[:, None], carrier[None, :]], x]
    table = pos[prods]
    Q = MultLattice(
        [L.labels[i] for i in carrier],
        L.order[carrier[:, None], carrier[None, :]],
        table,
        bottom=int(pos[x]),
        top=int(pos[L.top]),
        name=f"{L.name}/{L.labels[x]}",
    )
    Q.embedding = carrier
    return Q.checked()


def _closed(L: MultLattice, S: Sequence[int]) -> tuple[int, int] | None:
    members = set(S)
    for s, t in itertools.product(S, repeat=2):
        if int(L.table[s, t]) not in members:
            return s, t
    return None


def localization_map(L: MultLattice, S: Iterable[int]) -> np.ndarray:
    """``a -> a_S``, the join of all x with ``x*s <= a`` for some s in S."""
    S = np.asarray(sorted(set(S)), dtype=np.intp)
    out = np.empty(L.size, dtype=np.intp)
    for a in range(L.size):
        # xs[x]: some s in S has x*s <= a
        xs = L.order[L.table[:, S], a].any(axis=1)
        out[a] = L.join_all(np.flatnonzero(xs))
    return out


def localize(L: MultLattice, S: Iterable[int], name: str | None = None) -> MultLattice:
    """L_S: the lattice of closures ``a_S`` with product ``(a_S b_S)_S``.

    The carrier keeps the representatives ``a_S`` as elements of ``L`` (in
    index order); ``result.embedding`` maps them back and
    ``result.closure`` maps every element of ``L`` to its index in L_S.
    ``S`` must be nonempty and closed under the product; top is not added.
    """
    S = sorted({int(s) for s in S})
    if not S:
        raise ValueError("the multiplicative set must be nonempty")
    bad = _closed(L, S)
    if bad is not None:
        a, b = bad
        raise ValueError(
            f"set is not multiplicatively closed: {L.labels[a]}*{L.labels[b]}"
            f" = {L.labels[L.table[a, b]]} is missing"
        )
    close = localization_map(L, S)
    _check_localization(L, close)

    carrier = np.unique(close)
    pos = np.full(L.size, -1, dtype=np.intp)
    pos[carrier] = np.arange(len(carrier))
    table = pos[close[L.table[carrier[:, None], carrier[None, :]]]]
    if name is None:
        name = f"{L.name}_{{{','.join(L.labels[s] for s in S)}}}"
    R = MultLattice(
        [L.labels[i] for i in carrier],
        L.order[carrier[:, None], carrier[None, :]],
        table,
        bottom=int(pos[close[L.bottom]]),
        top=int(pos[close[L.top]]),
        name=name,
    )
    R.embedding = carrier
    R.closure = pos[close]
    return R.checked()


def _check_localization(L: MultLattice, close: np.ndarray) -> None:
    idx = np.arange(L.size)
    if not L.order[idx, close].all():
        raise LatticeInvariantError("localization map is not extensive")
    if not (close[close] == close).all():
        raise LatticeInvariantError("localization map is not idempotent")
    mono = L.order & ~L.order[close[:, None], close[None, :]]
    if mono.any():
        raise LatticeInvariantError("localization map is not monotone")
    lhs = close[L.table]
    rhs = close[L.table[close[:, None], close[None, :]]]
    if (lhs != rhs).any():
        raise LatticeInvariantError("localization map is not multiplicative up to closure")


def prime_complement(L: MultLattice, p: int) -> list[int]:
    """{x : x not <= p}, the multiplicative set used for localizing at p."""
    return [x for x in range(L.size) if not L.order[x, p]]


def localize_at_prime(L: MultLattice, p: int) -> MultLattice:
    if p == L.top or not L.prime_mask()[p]:
        raise ValueError(f"{L.labels[p]} is not a prime element of {L.name}")
    return localize(L, prime_complement(L, p), name=f"{L.name}_({L.labels[p]})")
