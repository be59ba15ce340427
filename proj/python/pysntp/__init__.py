"""Python bindings for the sntp exchange-economy simulator."""

from ._sntp import (
    ConvergenceError,
    DomainError,
    Error,
    SamplingError,
    UnreachableUtility,
    UtilitySpec,
    ValidationError,
    advance,
    bundled_scenarios,
    example3,
    example3_value,
    expenditure,
    flatten,
    gradient,
    has_trade,
    hicksian_demand,
    indirect_utility,
    inverse_normalized_demand,
    is_pareto_optimal,
    normalized_demand,
    simulate,
    trade_interval,
    unflatten,
    utility,
    verify,
)

__all__ = [
    "ConvergenceError",
    "DomainError",
    "Error",
    "SamplingError",
    "UnreachableUtility",
    "UtilitySpec",
    "ValidationError",
    "advance",
    "bundled_scenarios",
    "example3",
    "example3_value",
    "expenditure",
    "flatten",
    "gradient",
    "has_trade",
    "hicksian_demand",
    "indirect_utility",
    "inverse_normalized_demand",
    "is_pareto_optimal",
    "normalized_demand",
    "simulate",
    "trade_interval",
    "unflatten",
    "utility",
    "verify",
]
