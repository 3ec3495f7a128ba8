"""Verification engine for the level-one Yangian double."""

import json as _json

from ._core import catalog, dump, rbar, rho, verify

__all__ = ["catalog", "dump", "rbar", "rho", "verify", "run"]


def run(config=None):
    """Run a suite from a dict config; returns (report dict, all_pass)."""
    text, ok = verify(_json.dumps(config or {}))
    return _json.loads(text), ok
