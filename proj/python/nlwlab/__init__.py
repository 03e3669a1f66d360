from ._nlwlab import (
    ConfigError,
    ContractViolation,
    LambdaW,
    W,
    closed_form_constants,
    energy,
    normalize_config,
    quadrature_constants,
    run,
    synthesize,
    version,
)

__all__ = [
    "ConfigError",
    "ContractViolation",
    "LambdaW",
    "W",
    "closed_form_constants",
    "energy",
    "normalize_config",
    "quadrature_constants",
    "run",
    "synthesize",
    "version",
]
