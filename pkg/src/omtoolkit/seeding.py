"""Seed plumbing: one root seed fans out into named per-module substreams.

Every random draw in the toolkit goes through a generator obtained from
``substream(seed, name)``, so any module can be re-run in isolation and
reproduce exactly what a full pipeline run would have produced.
"""

from __future__ import annotations

import zlib

import numpy as np


def substream(seed: int, name: str) -> np.random.Generator:
    """Return a generator for the named substream of a root seed.

    The name is folded in via CRC-32 so the mapping is stable across runs
    and Python processes (unlike ``hash``).
    """
    tag = zlib.crc32(name.encode("utf-8"))
    return np.random.default_rng(np.random.SeedSequence([int(seed), tag]))
