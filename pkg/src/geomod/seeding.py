"""Seed derivation.

``mix64`` is the SplitMix64 finalizer (Steele, Lea & Flood 2014)::

    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
    z = (z ^ (z >> 27)) * 0x94D049BB133111EB
    z =  z ^ (z >> 31)

with all arithmetic modulo 2**64. Trial ``t`` of an experiment with base
seed ``s`` uses ``mix64(s ^ (t * 0x9E3779B97F4A7C15 mod 2**64))``; that value
keys a Philox-4x64 generator (counter starting at zero), see
:func:`geomod.domain.make_rng`.
"""

MASK = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15


def mix64(z: int) -> int:
    z &= MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
    return z ^ (z >> 31)


def derive_seed(base_seed: int, index: int) -> int:
    return mix64((base_seed & MASK) ^ ((index * GOLDEN) & MASK))
