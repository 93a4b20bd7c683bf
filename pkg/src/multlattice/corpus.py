"""Reference lattice corpus used by the acceptance suite and stress tests."""

from __future__ import annotations

from .constructions import divisor_lattice, idempotent_chain, localize_at_prime, product, quotient
from .lattice import MultLattice

DIVISOR_PARAMS = (4, 8, 12, 16, 24, 30, 36, 60, 360, 900)
PRODUCT_PARAMS = ((4, 9), (8, 27), (12, 30))
CHAIN_SIZES = range(2, 7)


def divisor_family() -> list[MultLattice]:
    return [divisor_lattice(n) for n in DIVISOR_PARAMS]


def product_family() -> list[MultLattice]:
    return [product([divisor_lattice(a), divisor_lattice(b)]) for a, b in PRODUCT_PARAMS]


def quotient_family(n: int = 360) -> list[MultLattice]:
    L = divisor_lattice(n)
    return [quotient(L, x) for x in L.proper_elements()]


def localization_family(n: int = 360) -> list[MultLattice]:
    L = divisor_lattice(n)
    return [localize_at_prime(L, p) for p in L.proper_elements() if L.prime_mask()[p]]


def chain_family() -> list[MultLattice]:
    return [idempotent_chain(k) for k in CHAIN_SIZES]


def corpus() -> list[MultLattice]:
    """Divisor lattices, products, every quotient and prime localization of
    D(360), and small idempotent chains."""
    return divisor_family() + product_family() + quotient_family() + localization_family() + chain_family()
