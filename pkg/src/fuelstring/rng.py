"""Portable deterministic random numbers for scenario generation.

SplitMix64, fixed here so any implementation in any language can reproduce
scenario files bit-for-bit from a seed:

    state' = (state + 0x9E3779B97F4A7C15) mod 2^64
    z = state'
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9 mod 2^64
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB mod 2^64
    output = z ^ (z >> 31)

Doubles in [0, 1) take the top 53 bits: (output >> 11) * 2^-53.
Normal deviates use the Box-Muller transform on two uniform draws
(the first redrawn if zero): sqrt(-2 ln u1) * cos(2 pi u2).
"""
from __future__ import annotations

import math

_MASK64 = 0xFFFFFFFFFFFFFFFF
_GAMMA = 0x9E3779B97F4A7C15


class SplitMix64:
    __slots__ = ("state",)

    def __init__(self, seed: int):
        self.state = seed & _MASK64

    def next_u64(self) -> int:
        self.state = (self.state + _GAMMA) & _MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        return z ^ (z >> 31)

    def next_float(self) -> float:
        """Uniform double in [0, 1)."""
        return (self.next_u64() >> 11) * 2.0 ** -53

    def uniform(self, low: float, high: float) -> float:
        return low + self.next_float() * (high - low)

    def normal(self) -> float:
        u1 = self.next_float()
        while u1 == 0.0:
            u1 = self.next_float()
        u2 = self.next_float()
        return math.sqrt(-2.0 * math.log(u1)) * math.cos(2.0 * math.pi * u2)

    def lognormal(self, mu: float, sigma: float) -> float:
        return math.exp(mu + sigma * self.normal())
