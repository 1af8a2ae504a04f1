"""
Radical inverses, van der Corput and Halton sequences.

phi_b(n) reverses the base-b digits of n behind the radix point. The value
is a finite sum, so every point keeps the exact digits alongside a double
that is the correctly rounded rational rev(digits) / b^len.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, List, Optional, Sequence, Tuple

import numpy as np

from algebra.digits import DigitVector, check_base, digits_base, from_digits
from algebra.primes import first_primes, pairwise_coprime
from utils.errors import InvalidBaseError, InvalidInputError


@dataclass(frozen=True)
class IntegerBaseSet:
    """Strictly increasing, pairwise coprime integer bases b_1 < ... < b_d."""
    bases: Tuple[int, ...]

    def __post_init__(self):
        bases = tuple(int(b) for b in self.bases)
        object.__setattr__(self, "bases", bases)
        if not bases:
            raise InvalidBaseError("at least one base is required")
        for b in bases:
            check_base(b)
        if any(x >= y for x, y in zip(bases, bases[1:])):
            raise InvalidBaseError(f"bases must be strictly increasing: {bases}")
        if not pairwise_coprime(bases):
            raise InvalidBaseError(f"bases must be pairwise coprime: {bases}")

    @property
    def d(self) -> int:
        return len(self.bases)

    @classmethod
    def first_primes(cls, d: int) -> "IntegerBaseSet":
        return cls(tuple(first_primes(d)))

    @classmethod
    def parse(cls, text: str) -> "IntegerBaseSet":
        try:
            return cls(tuple(int(tok) for tok in text.split(",")))
        except ValueError:
            raise InvalidBaseError(f"bad base list {text!r}") from None


@dataclass(frozen=True)
class RadicalInverse:
    """phi_b(n) as output digits y_1, y_2, ... (value sum y_j * base^-j) and its double."""
    base: int
    digits: DigitVector  # digits[j] is the coefficient of base^-(j+1)
    value: float

    @property
    def exact(self) -> Fraction:
        """The exact rational value."""
        length = len(self.digits)
        if length == 0:
            return Fraction(0)
        rev = int(from_digits(self.digits.digits[::-1], self.base))
        return Fraction(rev, self.base ** length)


def digits_to_unit(digits: Sequence[int], base: int) -> float:
    """Correctly rounded double of sum(digits[j] * base^-(j+1))."""
    length = len(digits)
    if length == 0:
        return 0.0
    rev = int(from_digits(digits[::-1], base))
    # int / int is correctly rounded in CPython
    return rev / base ** length


def radical_inverse(n: int, b: int) -> RadicalInverse:
    """phi_b(n) = sum n_j b^-(j+1) over the base-b digits of n."""
    dv = digits_base(n, b)
    return RadicalInverse(b, dv, digits_to_unit(dv.digits, b))


@dataclass(frozen=True)
class UnitPoint:
    """A point of [0,1)^d, optionally with the exact output digits of each coordinate."""
    coords: Tuple[float, ...]
    exact_digits: Optional[Tuple[DigitVector, ...]] = field(default=None, compare=False)

    @property
    def d(self) -> int:
        return len(self.coords)

    def exact(self) -> Tuple[Fraction, ...]:
        if self.exact_digits is None:
            raise InvalidInputError("point carries no exact digits")
        out = []
        for dv in self.exact_digits:
            out.append(RadicalInverse(dv.base, dv, 0.0).exact)
        return tuple(out)


def halton_point(n: int, bases: IntegerBaseSet) -> UnitPoint:
    """x_n = (phi_{b_1}(n), ..., phi_{b_d}(n))."""
    parts = [radical_inverse(n, b) for b in bases.bases]
    return UnitPoint(tuple(r.value for r in parts), tuple(r.digits for r in parts))


def halton_prefix(bases: IntegerBaseSet, N: int, start: int = 0) -> Iterator[UnitPoint]:
    """Yield x_start, ..., x_{N-1} in index order."""
    if N < 1:
        raise InvalidInputError(f"N must be >= 1, got {N}")
    for n in range(start, N):
        yield halton_point(n, bases)


def van_der_corput(b: int, N: int) -> List[float]:
    return [p.coords[0] for p in halton_prefix(IntegerBaseSet((b,)), N)]


def radical_inverse_array(b: int, N: int) -> np.ndarray:
    """phi_b(0), ..., phi_b(N-1) as float64, bit-identical to ``radical_inverse``.

    Numerator and denominator stay below 2^53, so each value is a single
    correctly rounded float division.
    """
    check_base(b)
    if N < 1:
        raise InvalidInputError(f"N must be >= 1, got {N}")
    length = 1
    while b ** length < N:
        length += 1
    if b ** length >= 1 << 53:
        raise InvalidInputError(f"prefix of {N} points is too long for the vectorized path")
    n = np.arange(N, dtype=np.int64)
    rev = np.zeros(N, dtype=np.int64)
    for _ in range(length):
        n, dgt = np.divmod(n, b)
        rev = rev * b + dgt
    return rev.astype(np.float64) / float(b ** length)


def halton_array(bases: IntegerBaseSet, N: int) -> np.ndarray:
    """First N Halton points as an (N, d) float64 array."""
    return np.column_stack([radical_inverse_array(b, N) for b in bases.bases])
