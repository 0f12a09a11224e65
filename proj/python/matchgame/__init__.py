"""Stable allocations of bi-matrix matching games.

Thin layer over the compiled module: reports, profiles and traces travel as
the same versioned JSON documents the command-line tool writes.
"""

import json

from ._matchgame import (
    FILE_VERSION,
    GENERATOR_VERSION,
    ContractViolation,
    Instance,
    NoFeasibleAgreement,
    ParseError,
    SolveResult,
    appendix_checks,
    appendix_instance,
    game_value,
    generate,
    parse_instance,
    replay,
    solve,
)
from ._matchgame import verify as _verify

__all__ = [
    "FILE_VERSION",
    "GENERATOR_VERSION",
    "ContractViolation",
    "Instance",
    "NoFeasibleAgreement",
    "ParseError",
    "SolveResult",
    "appendix_checks",
    "appendix_instance",
    "game_value",
    "generate",
    "load_instance",
    "parse_instance",
    "replay",
    "solve",
    "verify",
]


def load_instance(path):
    with open(path, encoding="utf-8") as fh:
        return parse_instance(fh.read())


def verify(instance, profile, eps=None):
    """Stability report of a profile document, as a dict."""
    return json.loads(_verify(instance, profile, eps))
