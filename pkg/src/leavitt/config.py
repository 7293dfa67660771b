"""Safety caps for graph and term sizes.

All hard limits are configuration, not constants: override per call, or
globally through environment variables (``LEAVITT_MAX_ARROWS`` etc.).
"""
from __future__ import annotations

import os
from dataclasses import dataclass

_ENV_PREFIX = "LEAVITT_MAX_"


@dataclass(frozen=True)
class Limits:
    """Upper bounds enforced by the library before memory does it for us."""

    max_arrows: int = 10_000
    max_cycles: int = 10_000
    max_terms: int = 1_000_000
    max_iso_vertices: int = 12

    @staticmethod
    def from_env() -> "Limits":
        kwargs = {}
        for field_name in ("arrows", "cycles", "terms", "iso_vertices"):
            raw = os.environ.get(_ENV_PREFIX + field_name.upper())
            if raw is not None:
                kwargs["max_" + field_name] = int(raw)
        return Limits(**kwargs)


DEFAULT_LIMITS = Limits.from_env()
