"""Finite multiplicative lattices and quasi n-absorbing elements."""

from .constructions import divisor_lattice, idempotent_chain, localize, localize_at_prime, product, quotient
from .errors import (
    CapExceededError,
    ImproperElementError,
    LatticeAxiomError,
    LatticeError,
    LatticeInvariantError,
    LatticeStructureError,
    MLATFormatError,
)
from .lattice import MultLattice, ValidationReport, validate
from .mlat import from_file, to_file
from .predicates import classify, lattice_flags
from .theorems import CATALOG, TheoremReport, run_all, run_check

__version__ = "0.1.0"
