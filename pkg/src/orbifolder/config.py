"""Resource caps and determinism knobs.

Caps are configuration, not constants: everything enumerative takes a
``Caps`` value and refuses, with a distinct error, to start work that
would exceed it.  ``ORBIFOLDER_CAP_OBJECTS`` and ``ORBIFOLDER_THREADS``
override the corresponding fields from the environment.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, replace

__all__ = ["Caps", "DEFAULT_CAPS", "caps_from_env"]

ENV_CAP_OBJECTS = "ORBIFOLDER_CAP_OBJECTS"
ENV_THREADS = "ORBIFOLDER_THREADS"


@dataclass(frozen=True)
class Caps:
    """Desk-scale guardrails with an escape hatch (construct your own)."""

    cap_objects: int = 500_000       # max objects in any enumerated set
    max_torus_rank: int = 4          # holonomy tuple length for tori
    max_genus: int = 3               # surface genus
    max_surface_group_order: int = 48
    max_perm_letters: int = 5        # wreath/orbifold symmetric degree
    max_symmetric_degree: int = 8    # symmetric-group preset
    max_perm_degree: int = 10        # permutation-generator input degree
    dense_table_max_order: int = 2048  # above this, products stay lazy
    threads: int = 1
    full_validation: bool = False
    validation_seed: int = 0x0F01D

    def with_overrides(self, **kw) -> "Caps":
        return replace(self, **kw)


DEFAULT_CAPS = Caps()


def caps_from_env(base: Caps | None = None, environ=None) -> Caps:
    """Apply environment overrides on top of ``base``."""
    env = os.environ if environ is None else environ
    caps = base if base is not None else DEFAULT_CAPS
    cap_objects = env.get(ENV_CAP_OBJECTS)
    if cap_objects is not None:
        caps = caps.with_overrides(cap_objects=int(cap_objects))
    threads = env.get(ENV_THREADS)
    if threads is not None:
        caps = caps.with_overrides(threads=max(1, int(threads)))
    return caps
