"""Counter-based normal noise for synthetic profiles.

The generator is fully specified so other implementations can reproduce it:

* ``key = seed XOR fnv1a64(utf8(source_id))``
* draw ``i`` (0-based) is the SplitMix64 output for state
  ``key + (i + 1) * 0x9E3779B97F4A7C15`` (mod 2**64), i.e. the mixer
  ``z ^= z >> 30; z *= 0xBF58476D1CE4E5B9; z ^= z >> 27;
  z *= 0x94D049BB133111EB; z ^= z >> 31``
* a draw becomes a uniform in (0, 1] as ``((r >> 11) + 1) * 2**-53``
* sample ``k`` uses draws ``2k`` and ``2k + 1`` through Box-Muller:
  ``sqrt(-2 ln u1) * cos(2 pi u2)``
"""

from __future__ import annotations

import math

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15
_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3


def fnv1a64(text: str) -> int:
    h = _FNV_OFFSET
    for byte in text.encode("utf-8"):
        h ^= byte
        h = (h * _FNV_PRIME) & MASK64
    return h


def splitmix64_mix(z: int) -> int:
    z &= MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
    return z ^ (z >> 31)


def stream_key(seed: int, source_id: str) -> int:
    return (seed ^ fnv1a64(source_id)) & MASK64


def draw(key: int, index: int) -> int:
    return splitmix64_mix(key + (index + 1) * GOLDEN_GAMMA)


def unit_uniform(r: int) -> float:
    return ((r >> 11) + 1) * 2.0**-53


def standard_normal(key: int, k: int) -> float:
    u1 = unit_uniform(draw(key, 2 * k))
    u2 = unit_uniform(draw(key, 2 * k + 1))
    return math.sqrt(-2.0 * math.log(u1)) * math.cos(2.0 * math.pi * u2)
