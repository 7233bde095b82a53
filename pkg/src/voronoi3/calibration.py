"""Frozen calibration constants for the asymptotic-bound audits.

The headline estimates carry unspecified implied constants.  Each is
calibrated once, on the grids described in the repository tests, and
frozen in ``data/constants.json``, keyed by bound family and by
(source_tag, vartheta, epsilon).  Runs never refit silently; the
environment variable ``VORONOI3_CONSTANTS`` may point at an alternative
file.
"""

from __future__ import annotations

import json
import os
from functools import lru_cache
from importlib import resources

ENV_VAR = "VORONOI3_CONSTANTS"


def source_key(source_tag: str, vartheta: float, epsilon: float) -> str:
    return f"{source_tag}|theta={vartheta:.6f}|eps={epsilon:.6f}"


@lru_cache(maxsize=8)
def _load(path: str | None) -> dict:
    if path:
        with open(path, "r", encoding="utf-8") as fh:
            return json.load(fh)
    with resources.files("voronoi3").joinpath("data/constants.json").open(
        "r", encoding="utf-8"
    ) as fh:
        return json.load(fh)


def load_constants(path: str | None = None) -> dict:
    """The constants table; explicit path > env var > packaged file."""
    return _load(path or os.environ.get(ENV_VAR) or None)


def get_constant(family: str, key: str | None = None, path: str | None = None):
    """Fetch one frozen entry; raises KeyError with the missing key named."""
    table = load_constants(path)
    if family not in table:
        raise KeyError(f"no frozen constants for family {family!r}")
    entry = table[family]
    if key is None:
        return entry
    if key not in entry:
        raise KeyError(f"no frozen constants for {family!r} at key {key!r}")
    return entry[key]
