"""Deterministic derivation of parallel random streams.

Every stochastic routine in the package draws from a counter-based Philox
generator keyed by the user seed plus a purpose tag (and, for parallel work,
a cell key or scenario index). Streams derived this way are independent of
evaluation order and of the degree of parallelism, so outputs are bitwise
reproducible.
"""

import hashlib

import numpy as np


def _token_words(token) -> list[int]:
    digest = hashlib.sha256(repr(token).encode("utf-8")).digest()
    return [int.from_bytes(digest[i : i + 8], "little") for i in range(0, 32, 8)]


def derive_rng(seed: int, *tokens) -> np.random.Generator:
    """Return a generator keyed by ``seed`` and a sequence of hashable tokens."""
    entropy = [int(seed) & 0xFFFFFFFFFFFFFFFF]
    for token in tokens:
        entropy.extend(_token_words(token))
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(entropy)))


def scenario_rng(seed: int, scenario_index: int) -> np.random.Generator:
    """Stream for one Monte Carlo scenario; independent of all other scenarios."""
    return derive_rng(seed, ("scenario", int(scenario_index)))


def cell_rng_seedtoken(trader: str, symbol: str, day: str) -> tuple:
    """Token identifying one (trader, symbol, day) batch cell."""
    return ("cell", str(trader), str(symbol), str(day))
