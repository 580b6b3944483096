"""Holomorphic functional calculus on Lipschitz curves."""

from ._core import (
    Curve,
    Error,
    InvalidArgument,
    NormalForm,
    ParseError,
    ResolventFailure,
    curve_log_op,
    curve_log_power,
    curve_power,
    evaluate,
    multiply,
    oracle,
    principal_log,
    principal_power,
    principal_power_op,
    resolvent,
    run_suite,
    suite_names,
)

__all__ = [
    "Curve",
    "Error",
    "InvalidArgument",
    "NormalForm",
    "ParseError",
    "ResolventFailure",
    "curve_log_op",
    "curve_log_power",
    "curve_power",
    "evaluate",
    "multiply",
    "oracle",
    "principal_log",
    "principal_power",
    "principal_power_op",
    "resolvent",
    "run_suite",
    "suite_names",
]
