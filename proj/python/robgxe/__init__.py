"""Robust Bayesian marginal gene-environment interaction scans."""

from ._robgxe import (
    ConfigError,
    Dataset,
    DegenerateError,
    DomainError,
    Error,
    GroundTruth,
    GuardError,
    Method,
    ParseError,
    __version__,
    auc,
    fit,
    load_dataset,
    psrf,
    sample_inverse_gaussian,
    scan,
    simulate,
    write_dataset,
)

__all__ = [
    "ConfigError",
    "Dataset",
    "DegenerateError",
    "DomainError",
    "Error",
    "GroundTruth",
    "GuardError",
    "Method",
    "ParseError",
    "__version__",
    "auc",
    "fit",
    "load_dataset",
    "psrf",
    "sample_inverse_gaussian",
    "scan",
    "simulate",
    "write_dataset",
]
