"""Python bindings for the kbsc supervisory control library.

Verdicts and supervisor tables are returned as plain dicts with the same
fields as the command-line JSON output.
"""

import json

from ._kbsc import (
    BoundError,
    KbscError,
    Model,
    ModelError,
    composite_dot,
    fuse,
    fuse_four_valued,
    load_model,
    oracle_condition,
    parse_model,
    plant_dot,
    search_exists,
)
from . import _kbsc

__all__ = [
    "BoundError",
    "KbscError",
    "Model",
    "ModelError",
    "SynthesisFailure",
    "check",
    "composite_dot",
    "fuse",
    "fuse_four_valued",
    "load_model",
    "oracle_condition",
    "oracle_solves",
    "parse_model",
    "plant_dot",
    "search_exists",
    "synthesize",
    "verify",
]


class SynthesisFailure(KbscError):
    """Raised by synthesize(); `verdict` holds the failing condition report."""

    def __init__(self, message, verdict):
        super().__init__(message)
        self.verdict = verdict


def check(model, condition="extended", relation=None, worlds=None, events=None):
    return json.loads(_kbsc.check_json(model, condition, relation, worlds, events))


def synthesize(model):
    out = json.loads(_kbsc.synthesize_json(model))
    if not out["ok"]:
        raise SynthesisFailure(out["error"], out["verdict"])
    return out["result"]


def verify(model, supervisors):
    return json.loads(_kbsc.verify_json(model, json.dumps(supervisors)))


def oracle_solves(model, supervisors, depth):
    return json.loads(_kbsc.oracle_solves_json(model, json.dumps(supervisors), depth))
