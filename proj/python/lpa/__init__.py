"""Leavitt path algebras over exact coefficient rings."""

from ._lpa import (
    Algebra,
    DomainError,
    Element,
    Graph,
    ParseError,
    System,
    UndecidedError,
    run,
)

__all__ = [
    "Algebra",
    "DomainError",
    "Element",
    "Graph",
    "ParseError",
    "System",
    "UndecidedError",
    "run",
]
