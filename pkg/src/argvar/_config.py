"""Runtime knobs read from the environment."""

import os

DEFAULT_MAX_REFINE = 12


def max_refine() -> int:
    """Maximum number of refinement doublings (``ARGVAR_MAX_REFINE``, default 12)."""
    raw = os.environ.get("ARGVAR_MAX_REFINE")
    if raw is None or raw.strip() == "":
        return DEFAULT_MAX_REFINE
    value = int(raw)
    if value < 1:
        raise ValueError("ARGVAR_MAX_REFINE must be a positive integer")
    return value
