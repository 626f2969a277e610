"""Structural identifiability of networked dynamic systems."""

import json

from ._ndsid import (
    Model,
    NdsidError,
    circuit_model,
    circuit_sweep_model,
    dsid_freq,
    load_model,
    normal_rank,
    parse_model,
    philox4x32_10,
    sweep_csv,
    tfm,
    tfm_det,
)

_EXIT = {"identifiable": 0, "unidentifiable": 1, "inconclusive": 2}


def check(model, method="auto"):
    """Verdict report as a dict; ``report["exit_code"]`` mirrors the CLI."""
    from ._ndsid import check_json

    report = json.loads(check_json(model, method))
    report["exit_code"] = _EXIT[report["verdict"]]
    return report


__all__ = [
    "Model",
    "NdsidError",
    "check",
    "circuit_model",
    "circuit_sweep_model",
    "dsid_freq",
    "load_model",
    "normal_rank",
    "parse_model",
    "philox4x32_10",
    "sweep_csv",
    "tfm",
    "tfm_det",
]
