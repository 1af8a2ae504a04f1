"""
Base-b digit extraction for arbitrary-precision integers.

Close-pair certificates carry indices with up to a few million bits, so
the conversion splits the number recursively by squared powers of the base
(b^(2^i)) once it is wider than ``digit_split_bits``. Division is done with
gmpy2, whose subquadratic algorithms keep the whole conversion
quasi-linear. Below the threshold a chunked divmod loop peels off as many
digits per big division as fit in a machine word.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple

import gmpy2
from gmpy2 import mpz

from utils.config import get_config
from utils.errors import InvalidBaseError, InvalidInputError


@dataclass(frozen=True)
class DigitVector:
    """Little-endian base-b digits in canonical form (no trailing zeros; () encodes 0)."""
    base: int
    digits: Tuple[int, ...]

    def __post_init__(self):
        if self.base < 2:
            raise InvalidBaseError(f"base must be >= 2, got {self.base}")
        if self.digits and self.digits[-1] == 0:
            raise InvalidInputError("digit vector is not canonical (trailing zero)")

    def __len__(self) -> int:
        return len(self.digits)

    def digit(self, j: int) -> int:
        """Digit j, with implicit zeros beyond the most significant digit."""
        return self.digits[j] if j < len(self.digits) else 0

    def value(self) -> int:
        """Positional reassembly sum(digits[j] * base**j)."""
        return int(from_digits(self.digits, self.base))

    def shared_prefix(self, other: "DigitVector") -> int:
        """Number of leading (least significant) positions on which both vectors agree.

        Returns ``-1`` when the vectors are identical, since they then agree everywhere.
        """
        if self.base != other.base:
            raise InvalidBaseError("cannot compare digit vectors in different bases")
        if self.digits == other.digits:
            return -1
        for j in range(max(len(self.digits), len(other.digits))):
            if self.digit(j) != other.digit(j):
                return j
        return -1  # unreachable


def check_base(b: int) -> None:
    if not isinstance(b, int) or b < 2:
        raise InvalidBaseError(f"base must be an integer >= 2, got {b!r}")


@lru_cache(maxsize=None)
def _chunk(b: int) -> Tuple[int, int]:
    """Largest power b^c below 2^62, with its exponent c."""
    c, chunk = 1, b
    while chunk * b < (1 << 62):
        chunk *= b
        c += 1
    return chunk, c


def _digits_chunked(x, b: int) -> List[int]:
    """Little-endian digits of a moderately sized x, trailing zeros stripped."""
    chunk, c = _chunk(b)
    out: List[int] = []
    while x:
        x, r = divmod(x, chunk)
        r = int(r)
        for _ in range(c):
            r, dgt = divmod(r, b)
            out.append(dgt)
    while out and out[-1] == 0:
        out.pop()
    return out


def _split(x, i: int, pows: Sequence, out: List[int], pad: bool, split_bits: int) -> None:
    # invariant: x < b^(2^(i+1)); when pad, exactly 2^(i+1) digits are emitted
    width = 1 << (i + 1)
    if i < 0 or x.bit_length() <= split_bits:
        b = int(pows[0])
        part = _digits_chunked(x, b)
        out.extend(part)
        if pad:
            out.extend([0] * (width - len(part)))
        return
    hi, lo = divmod(x, pows[i])
    _split(lo, i - 1, pows, out, True, split_bits)
    _split(hi, i - 1, pows, out, pad, split_bits)


def digits_base(n: int, b: int, split_bits: Optional[int] = None) -> DigitVector:
    """
    Canonical little-endian base-b digits of a non-negative integer.

    Args:
        n: Index (Python int or gmpy2 mpz), n >= 0
        b: Base, b >= 2
        split_bits: Divide-and-conquer threshold (default from config)

    Returns:
        DigitVector whose positional reassembly equals n
    """
    check_base(b)
    if n < 0:
        raise InvalidInputError(f"index must be non-negative, got {n}")
    if n == 0:
        return DigitVector(b, ())
    if split_bits is None:
        split_bits = get_config().digit_split_bits
    x = mpz(n)
    if x.bit_length() <= split_bits:
        return DigitVector(b, tuple(_digits_chunked(x, b)))
    pows = [mpz(b)]
    while pows[-1] * pows[-1] <= x:
        pows.append(pows[-1] * pows[-1])
    out: List[int] = []
    _split(x, len(pows) - 1, pows, out, False, split_bits)
    while out and out[-1] == 0:
        out.pop()
    return DigitVector(b, tuple(out))


@lru_cache(maxsize=256)
def _power(b: int, e: int):
    return gmpy2.mpz(b) ** e


def from_digits(digits: Sequence[int], b: int):
    """Positional value sum(digits[j] * b**j) as an mpz, combined recursively."""
    length = len(digits)
    if length <= 64:
        acc = mpz(0)
        for dgt in reversed(digits):
            acc = acc * b + dgt
        return acc
    mid = length // 2
    lo = from_digits(digits[:mid], b)
    hi = from_digits(digits[mid:], b)
    return hi * _power(b, mid) + lo


def to_decimal(n) -> str:
    """Decimal string of an arbitrarily large integer (no str() length limit)."""
    return mpz(n).digits(10)


def from_decimal(s: str) -> int:
    """Inverse of ``to_decimal``."""
    return int(mpz(s, 10))
