"""Discrete fractional sums and differences with exact rational arithmetic.

Grid functions are passed as a list of values plus an origin; results come
back as dicts with ``origin``, ``direction``, ``domain`` and ``values``.
Values are :class:`fractions.Fraction` under the rational backend and floats
under the floating one.
"""

from ._fracdiff import (
    BackendOverflow,
    BudgetExceeded,
    DirectFormIntegerOrder,
    DomainError,
    EmptyValues,
    FracdiffError,
    GridTooShort,
    ParseError,
    PoleAmbiguous,
    caputo_difference,
    check_identities,
    evaluate_theorem,
    falling,
    fractional_sum,
    identities,
    lag_weight,
    riemann_difference,
    rising,
    search_counterexamples,
    theorems,
)

__all__ = [
    "BackendOverflow",
    "BudgetExceeded",
    "DirectFormIntegerOrder",
    "DomainError",
    "EmptyValues",
    "FracdiffError",
    "GridTooShort",
    "ParseError",
    "PoleAmbiguous",
    "caputo_difference",
    "check_identities",
    "evaluate_theorem",
    "falling",
    "fractional_sum",
    "identities",
    "lag_weight",
    "riemann_difference",
    "rising",
    "search_counterexamples",
    "theorems",
]
