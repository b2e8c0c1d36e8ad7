"""Optimum-path forest classification and resampling for imbalanced binary data."""

from ._core import (
    OPFClassifier,
    OpfError,
    best_k,
    evaluate,
    f1_score,
    hybrid,
    load_csv,
    methods,
    oversample,
    resample,
    undersample,
    wilcoxon,
)

__all__ = [
    "OPFClassifier",
    "OpfError",
    "best_k",
    "evaluate",
    "f1_score",
    "hybrid",
    "load_csv",
    "methods",
    "oversample",
    "resample",
    "undersample",
    "wilcoxon",
]
