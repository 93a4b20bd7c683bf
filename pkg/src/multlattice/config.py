"""Default caps.  ``MLAT_SIZE_CAP`` in the environment overrides the size cap."""

from __future__ import annotations

import os

DEFAULT_SIZE_CAP = 4096
# n-absorbing checks enumerate (n+1)-tuples, so their degree is capped lower
# than the pairwise quasi checks.
ABSORBING_N_CAP = 4
QUASI_N_CAP = 8
DEFAULT_N_MAX = 3


def size_cap() -> int:
    raw = os.environ.get("MLAT_SIZE_CAP")
    if raw is None or raw == "":
        return DEFAULT_SIZE_CAP
    try:
        cap = int(raw)
    except ValueError:
        raise ValueError(f"MLAT_SIZE_CAP must be an integer, got {raw!r}") from None
    if cap < 1:
        raise ValueError("MLAT_SIZE_CAP must be positive")
    return cap
