"""Boosting with alternating decision and extra trees for imbalanced data.

Thin wrapper over the C++ core. Labels are 0/1 with 1 the minority class.
"""

import json

from ._meboost import (
    Dataset,
    InvalidArgument,
    Model,
    ParseError,
    TrainingError,
    auroc,
    auroc_trapezoid,
    load_csv,
    load_keel,
    roc_curve,
    stratified_holdout,
    stratified_kfold,
    summarize,
)
from . import _meboost

METHODS = ("meboost", "adaboost-dt", "adaboost-et", "rusboost", "smoteboost")


def train(train, holdout, method="meboost", seed=0, **options):
    """Train `method` on `train`, early-stopping on `holdout`.

    Options mirror the benchmark config keys (window, max_rounds,
    max_depth, first_kind, ...). Returns (Model, info dict).
    """
    return _meboost._train(train, holdout, method, seed, options)


def run_experiment(config, jobs=1):
    """Run a benchmark config file. Returns (report dict, text table)."""
    text, table = _meboost._run_experiment(str(config), jobs)
    return json.loads(text), table


__all__ = [
    "Dataset",
    "InvalidArgument",
    "METHODS",
    "Model",
    "ParseError",
    "TrainingError",
    "auroc",
    "auroc_trapezoid",
    "load_csv",
    "load_keel",
    "roc_curve",
    "run_experiment",
    "stratified_holdout",
    "stratified_kfold",
    "summarize",
    "train",
]
