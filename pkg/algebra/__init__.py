"""
Exact arithmetic: base-b digit vectors, primes and polynomials over F_p.
"""

from .digits import DigitVector, digits_base, from_digits, to_decimal, from_decimal
from .ffpoly import PolyOverFp, format_poly, parse_poly, parse_poly_list, poly_divmod, poly_gcd
from .primes import first_primes, is_prime, pairwise_coprime

__all__ = [
    "DigitVector",
    "digits_base",
    "from_digits",
    "to_decimal",
    "from_decimal",
    "PolyOverFp",
    "format_poly",
    "parse_poly",
    "parse_poly_list",
    "poly_divmod",
    "poly_gcd",
    "first_primes",
    "is_prime",
    "pairwise_coprime",
]
