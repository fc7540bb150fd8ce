"""Deterministic seed splitting.

Every randomized task derives its generator from a root seed plus a path of
string labels, so parallel and serial runs of the same configuration agree.
The rule: the generator for path (a, b, ...) under root seed s is
``random.Random("s|a|b|...")``.  String seeding in `random` is stable across
processes and platforms (it does not go through salted `hash()`).
"""

from __future__ import annotations

import random

__all__ = ["derived_rng", "seed_path"]


def seed_path(root_seed: int | str, *labels: str | int) -> str:
    return "|".join(str(part) for part in (root_seed, *labels))


def derived_rng(root_seed: int | str, *labels: str | int) -> random.Random:
    """Generator for the given label path under the root seed."""
    return random.Random(seed_path(root_seed, *labels))
