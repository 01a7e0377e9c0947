"""Global numeric tolerances, configurable once at startup.

The defaults are picked for the desk scale the library targets (block
dimensions below ten, entries of order one).  They can be replaced
globally either through :func:`set_tolerances` before any computation,
or by pointing the ``LOGMAJ_TOLERANCES`` environment variable at a JSON
file of overrides, e.g. ``{"maj": 1e-7}``.
"""

from __future__ import annotations

import dataclasses
import json
import os


@dataclasses.dataclass(frozen=True)
class Tolerances:
    """Numeric tolerances used across the library.

    alg     relative tolerance for algebra-level residuals (hermiticity
            checks, eigendecomposition reconstruction, rank cuts)
    maj     absolute tolerance on (log-)prefix-integral comparisons
    norm    relative tolerance for norm evaluations and comparisons
    jordan  absolute tolerance on operator-norm residuals of Jordan checks
    iso     tolerance for isometry analysis checks
    strict  base scale for strictness gaps in SLM checks
    """

    alg: float = 1e-9
    maj: float = 1e-8
    norm: float = 1e-9
    jordan: float = 1e-8
    iso: float = 1e-8
    strict: float = 1e-12


_ENV_VAR = "LOGMAJ_TOLERANCES"


def _load_default() -> Tolerances:
    path = os.environ.get(_ENV_VAR)
    if not path:
        return Tolerances()
    with open(path, "r", encoding="utf-8") as fh:
        overrides = json.load(fh)
    return Tolerances(**overrides)


_current = _load_default()


def tolerances() -> Tolerances:
    """Return the tolerances in effect."""
    return _current


def set_tolerances(**overrides: float) -> Tolerances:
    """Replace the global tolerances.

    Intended to be called once, before any computation; library values are
    immutable, so changing tolerances mid-run only affects later calls.
    """
    global _current
    _current = dataclasses.replace(_current, **overrides)
    return _current
