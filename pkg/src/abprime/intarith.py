"""Modular integer arithmetic over Z/mZ.

Python ints are arbitrary precision, so they serve directly as the natural
number type; everything here is a plain function on ints.  The one wrinkle
worth a type of its own is inversion modulo a composite: a failed inversion
is not an error, it hands us a proper divisor of the modulus, and several
higher layers want exactly that by-product.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

from .instrument import active_counter

__all__ = [
    "Inverse",
    "FactorFound",
    "InverseOutcome",
    "mod_pow",
    "gcd",
    "try_invert",
    "decompose_two_power",
    "floor_log2",
]


@dataclass(frozen=True)
class Inverse:
    """Successful inversion: value * input == 1  (mod modulus)."""

    value: int


@dataclass(frozen=True)
class FactorFound:
    """A proper divisor of the modulus, surfaced by a failed inversion."""

    divisor: int


InverseOutcome = Union[Inverse, FactorFound]


def mod_pow(base: int, exponent: int, modulus: int) -> int:
    """base**exponent mod modulus via left-to-right binary exponentiation.

    Uses at most 2*bitlen(exponent) modular multiplications; they are
    tallied on the active OpCounter.  With counting off this defers to the
    built-in pow, which computes the identical value.
    """
    if modulus < 2:
        raise ValueError(f"modulus must be >= 2, got {modulus}")
    if exponent < 0:
        raise ValueError("negative exponent")
    counter = active_counter()
    if counter is None:
        return pow(base, exponent, modulus)
    if exponent == 0:
        return 1 % modulus
    base %= modulus
    result = base
    for bit in bin(exponent)[3:]:
        result = result * result % modulus
        counter.int_mults += 1
        if bit == "1":
            result = result * base % modulus
            counter.int_mults += 1
    return result


def gcd(a: int, b: int) -> int:
    """Greatest common divisor; (0, 0) is rejected."""
    if a == 0 and b == 0:
        raise ValueError("gcd(0, 0) is undefined")
    return math.gcd(a, b)


def try_invert(a: int, modulus: int) -> InverseOutcome:
    """Invert a modulo modulus, or extract the obstruction.

    Returns Inverse(v) with a*v == 1 (mod modulus) when gcd(a, modulus) == 1,
    otherwise FactorFound(gcd(a, modulus)) -- a proper divisor, since
    0 < a < modulus.
    """
    if modulus < 2:
        raise ValueError(f"modulus must be >= 2, got {modulus}")
    if not 0 < a < modulus:
        raise ValueError(f"need 0 < a < modulus, got a={a}")
    g = math.gcd(a, modulus)
    if g == 1:
        return Inverse(pow(a, -1, modulus))
    return FactorFound(g)


def decompose_two_power(n: int) -> tuple[int, int]:
    """Write n = 2**s * t with t odd; returns (s, t)."""
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    s = (n & -n).bit_length() - 1
    return s, n >> s


def floor_log2(n: int) -> int:
    """Largest k with 2**k <= n."""
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    return n.bit_length() - 1
