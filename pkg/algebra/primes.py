"""Prime moduli, prime lists and Euler's totient (backed by sympy)."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import gcd
from typing import List, Sequence

import sympy

from utils.errors import InvalidBaseError, InvalidInputError


@lru_cache(maxsize=1024)
def is_prime(p: int) -> bool:
    return p >= 2 and bool(sympy.isprime(p))


@dataclass(frozen=True)
class PrimeModulus:
    """A prime p defining the field F_p."""
    p: int

    def __post_init__(self):
        if not isinstance(self.p, int) or not is_prime(self.p):
            raise InvalidBaseError(f"modulus must be prime, got {self.p!r}")

    def __int__(self) -> int:
        return self.p


def first_primes(d: int) -> List[int]:
    """The first d primes in increasing order."""
    if d < 1:
        raise InvalidInputError(f"dimension must be >= 1, got {d}")
    return [int(sympy.prime(i)) for i in range(1, d + 1)]


def euler_totient(n: int) -> int:
    return int(sympy.totient(n))


def pairwise_coprime(values: Sequence[int]) -> bool:
    return all(gcd(a, b) == 1 for i, a in enumerate(values) for b in values[i + 1:])
