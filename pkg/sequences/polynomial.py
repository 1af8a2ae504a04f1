"""
b(X)-adic radical inverses and Halton-type sequences over F_p.

The index n is read as n(X) = n_0 + n_1 X + ... from its base-p digits,
expanded as n(X) = sum a_j(X) b(X)^j with deg a_j < e = deg b, and mapped
to sum a_j(p) / (p^e)^(j+1).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, List, Sequence, Tuple

from algebra.digits import DigitVector
from algebra.ffpoly import (
    PolyOverFp,
    int_to_poly,
    parse_poly_list,
    poly_divmod,
    poly_gcd,
    poly_to_int,
)
from algebra.primes import PrimeModulus
from sequences.halton import UnitPoint, digits_to_unit
from utils.errors import InvalidBaseError, InvalidInputError


@dataclass(frozen=True)
class PolyBaseSet:
    """Pairwise coprime base polynomials b_1(X), ..., b_d(X) over F_p, each of degree >= 1."""
    p: int
    bases: Tuple[PolyOverFp, ...]

    def __post_init__(self):
        PrimeModulus(self.p)
        object.__setattr__(self, "bases", tuple(self.bases))
        if not self.bases:
            raise InvalidBaseError("at least one base polynomial is required")
        for b in self.bases:
            if b.p != self.p:
                raise InvalidBaseError(f"base {b} is not over F_{self.p}")
            if b.degree < 1:
                raise InvalidBaseError(f"base polynomial {b} must have degree >= 1")
        for i, a in enumerate(self.bases):
            for b in self.bases[i + 1:]:
                if poly_gcd(a, b).degree != 0:
                    raise InvalidBaseError(f"base polynomials {a} and {b} are not coprime")

    @property
    def d(self) -> int:
        return len(self.bases)

    @property
    def degrees(self) -> Tuple[int, ...]:
        return tuple(b.degree for b in self.bases)


@dataclass(frozen=True)
class BXDigitExpansion:
    """Base-b(X) expansion of n(X): digit polynomials a_j and their values a_j(p)."""
    base: PolyOverFp
    digit_polys: Tuple[PolyOverFp, ...]
    digit_values: Tuple[int, ...]

    def reassemble(self) -> PolyOverFp:
        """sum a_j(X) b(X)^j by Horner's rule."""
        acc = PolyOverFp.zero(self.base.p)
        for a in reversed(self.digit_polys):
            acc = acc * self.base + a
        return acc

    def as_digit_vector(self) -> DigitVector:
        """Digit values as a base-p^e digit vector (value sum a_j(p) (p^e)^-(j+1))."""
        return DigitVector(self.base.p ** self.base.degree, self.digit_values)


def bx_expand(n: int, b: PolyOverFp) -> BXDigitExpansion:
    """Expand n(X) in base b(X) by repeated Euclidean division."""
    if b.degree < 1:
        raise InvalidBaseError(f"base polynomial {b} must have degree >= 1")
    rest = int_to_poly(n, b.p)
    polys: List[PolyOverFp] = []
    while not rest.is_zero():
        rest, a = poly_divmod(rest, b)
        polys.append(a)
    return BXDigitExpansion(b, tuple(polys), tuple(poly_to_int(a) for a in polys))


@dataclass(frozen=True)
class PolyRadicalInverse:
    expansion: BXDigitExpansion
    value: float

    @property
    def exact(self) -> Fraction:
        q = self.expansion.base.p ** self.expansion.base.degree
        return sum((Fraction(v, q ** (j + 1)) for j, v in enumerate(self.expansion.digit_values)),
                   Fraction(0))


def poly_radical_inverse(n: int, b: PolyOverFp) -> PolyRadicalInverse:
    """phi_{b(X)}(n) = sum a_j(p) / (p^e)^(j+1)."""
    exp = bx_expand(n, b)
    return PolyRadicalInverse(exp, digits_to_unit(exp.digit_values, b.p ** b.degree))


def halton_type_point(n: int, bases: PolyBaseSet) -> UnitPoint:
    """x_n = (phi_{b_1(X)}(n), ..., phi_{b_d(X)}(n))."""
    parts = [poly_radical_inverse(n, b) for b in bases.bases]
    return UnitPoint(tuple(r.value for r in parts),
                     tuple(r.expansion.as_digit_vector() for r in parts))


def halton_type_prefix(bases: PolyBaseSet, N: int, start: int = 0) -> Iterator[UnitPoint]:
    if N < 1:
        raise InvalidInputError(f"N must be >= 1, got {N}")
    for n in range(start, N):
        yield halton_type_point(n, bases)


def faure_bases(p: int) -> PolyBaseSet:
    """X, X-1, ..., X-(p-1): the Halton-type form of the Faure sequence in base p."""
    return PolyBaseSet(p, tuple(PolyOverFp.linear(-c, p) for c in range(p)))


def parse_poly_bases(text: str, p: int) -> PolyBaseSet:
    return PolyBaseSet(p, tuple(parse_poly_list(text, p)))


def shared_digit_prefix(u: BXDigitExpansion, v: BXDigitExpansion) -> int:
    """Leading digit polynomials on which two expansions agree (-1 when identical)."""
    return u.as_digit_vector().shared_prefix(v.as_digit_vector())


def digit_polys_agree(u: BXDigitExpansion, v: BXDigitExpansion, count: int) -> bool:
    def at(e: BXDigitExpansion, j: int) -> Sequence[int]:
        return e.digit_polys[j].coeffs if j < len(e.digit_polys) else ()
    return all(at(u, j) == at(v, j) for j in range(count))
