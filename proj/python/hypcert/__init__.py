"""Rigorous attractor enclosures and hyperbolicity certificates for maps."""

from ._core import (
    ConfigError,
    HenonMap,
    Interval,
    IntervalError,
    MapSystem,
    NewtonError,
    Pipeline,
    SmaleMap,
    cos,
    enclose_literal,
    min_cover,
    pi_interval,
    prove_fixed_point,
    prove_period_two,
    realize,
    sin,
    sqr,
    sqrt,
)

__all__ = [
    "ConfigError",
    "HenonMap",
    "Interval",
    "IntervalError",
    "MapSystem",
    "NewtonError",
    "Pipeline",
    "SmaleMap",
    "cos",
    "enclose_literal",
    "min_cover",
    "pi_interval",
    "prove_fixed_point",
    "prove_period_two",
    "realize",
    "sin",
    "sqr",
    "sqrt",
]
