"""Predicate language and family search."""

from .parser import And, Atom, Not, Or, PredicateSyntaxError, parse_predicate
from .search import FamilySpec, SearchResult, eval_predicate, search, shrink

__all__ = [
    "And",
    "Atom",
    "FamilySpec",
    "Not",
    "Or",
    "PredicateSyntaxError",
    "SearchResult",
    "eval_predicate",
    "parse_predicate",
    "search",
    "shrink",
]
