"""Metastable layer dynamics of the relaxed Cahn-Hilliard equation.

Thin python face over the C++ core: configuration normalization, the
closed-form reference quantities (c0, the standing wave, transition costs),
and the simulate / sweep / certify drivers. All heavy lifting happens in the
compiled extension; results come back as plain dicts, strings and lists.
"""

try:
    from ._hch import (  # packaged layout (wheel)
        c0,
        certify,
        normalize_config,
        omega,
        phi,
        profile,
        simulate,
        simulate_to,
        sweep,
    )
except ImportError:  # in-tree build: extension sits on PYTHONPATH
    from _hch import (
        c0,
        certify,
        normalize_config,
        omega,
        phi,
        profile,
        simulate,
        simulate_to,
        sweep,
    )

__all__ = [
    "c0",
    "certify",
    "normalize_config",
    "omega",
    "phi",
    "profile",
    "simulate",
    "simulate_to",
    "sweep",
]
