"""Adaptive kriging designs with the variance of improvement for global fit."""

import json as _json

from ._vigf import (
    GpModel,
    HkModel,
    VigfError,
    condition,
    criterion,
    criterion_hk,
    discrepancy_l2,
    evaluate,
    fit,
    fit_hk,
    lhs_maximin,
    lhs_random,
    list_functions,
    nrmse,
    select_batch,
    select_next,
    select_next_hk,
)
from ._vigf import _run_json

__all__ = [
    "GpModel",
    "HkModel",
    "VigfError",
    "condition",
    "criterion",
    "criterion_hk",
    "discrepancy_l2",
    "evaluate",
    "fit",
    "fit_hk",
    "lhs_maximin",
    "lhs_random",
    "list_functions",
    "nrmse",
    "run",
    "select_batch",
    "select_next",
    "select_next_hk",
]


def run(mode="sequential", config=None, **overrides):
    """Run an experiment and return the results document as a dict.

    ``mode`` is one of ``sequential``, ``batch``, ``multifidelity`` or ``lhs``.
    ``config`` uses the same keys as the command-line config file; keyword
    arguments override it.
    """
    merged = dict(config or {})
    merged.update(overrides)
    return _json.loads(_run_json(mode, _json.dumps(merged)))
