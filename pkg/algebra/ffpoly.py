"""
Arithmetic in F_p[X].

Polynomials are immutable little-endian coefficient tuples with entries in
{0, ..., p-1}. The last coefficient is nonzero; () is the zero polynomial.
The integer n with base-p digits (n_0, n_1, ...) corresponds to the
polynomial n_0 + n_1 X + n_2 X^2 + ...

Text format (CLI): comma-separated little-endian coefficients, e.g.
"1,1,1" is 1 + X + X^2; several polynomials are separated by ";".
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import List, Sequence, Tuple

from algebra.digits import digits_base, from_digits
from algebra.primes import PrimeModulus
from utils.errors import (
    InvalidInputError,
    ModulusMismatchError,
    PolynomialDivisionError,
    ResourceCapError,
)

KARATSUBA_THRESHOLD = 64
MAX_DEGREE = 1 << 40


def _trim(c: List[int]) -> Tuple[int, ...]:
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


@dataclass(frozen=True)
class PolyOverFp:
    """Polynomial over F_p in canonical little-endian form."""
    p: int
    coeffs: Tuple[int, ...] = ()

    @classmethod
    def make(cls, coeffs: Sequence[int], p: int) -> "PolyOverFp":
        """Validate p, reduce coefficients mod p and canonicalize."""
        PrimeModulus(p)
        return cls(p, _trim([int(c) % p for c in coeffs]))

    @classmethod
    def _raw(cls, coeffs: List[int], p: int) -> "PolyOverFp":
        return cls(p, _trim(coeffs))

    @classmethod
    def zero(cls, p: int) -> "PolyOverFp":
        return cls(p, ())

    @classmethod
    def one(cls, p: int) -> "PolyOverFp":
        return cls(p, (1,))

    @classmethod
    def x(cls, p: int) -> "PolyOverFp":
        return cls(p, (0, 1))

    @classmethod
    def linear(cls, shift: int, p: int) -> "PolyOverFp":
        """X + shift."""
        return cls.make([shift, 1], p)

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def coeff(self, j: int) -> int:
        return self.coeffs[j] if 0 <= j < len(self.coeffs) else 0

    def _check(self, other: "PolyOverFp") -> None:
        if not isinstance(other, PolyOverFp):
            raise TypeError(f"polynomial over GF({self.p}) expected")
        if other.p != self.p:
            raise ModulusMismatchError(f"moduli differ: {self.p} vs {other.p}")

    def __add__(self, other: "PolyOverFp") -> "PolyOverFp":
        self._check(other)
        p = self.p
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        c = list(a)
        for i, v in enumerate(b):
            c[i] = (c[i] + v) % p
        return PolyOverFp._raw(c, p)

    def __neg__(self) -> "PolyOverFp":
        p = self.p
        return PolyOverFp(p, tuple((-v) % p for v in self.coeffs))

    def __sub__(self, other: "PolyOverFp") -> "PolyOverFp":
        self._check(other)
        return self + (-other)

    def __mul__(self, other) -> "PolyOverFp":
        if isinstance(other, int):
            return PolyOverFp._raw([(v * other) % self.p for v in self.coeffs], self.p)
        self._check(other)
        if self.is_zero() or other.is_zero():
            return PolyOverFp.zero(self.p)
        return PolyOverFp._raw(_mul(list(self.coeffs), list(other.coeffs), self.p), self.p)

    __rmul__ = __mul__

    def __divmod__(self, other: "PolyOverFp"):
        return poly_divmod(self, other)

    def __floordiv__(self, other: "PolyOverFp") -> "PolyOverFp":
        return poly_divmod(self, other)[0]

    def __mod__(self, other: "PolyOverFp") -> "PolyOverFp":
        return poly_divmod(self, other)[1]

    def __pow__(self, k: int) -> "PolyOverFp":
        return poly_pow(self, k)

    def __call__(self, x: int) -> int:
        """Evaluate at the integer x with coefficients read as integers in {0, ..., p-1}."""
        return int(from_digits(self.coeffs, x)) if x >= 2 else sum(
            c * x ** j for j, c in enumerate(self.coeffs))

    def monic(self) -> "PolyOverFp":
        if self.is_zero():
            return self
        inv = pow(self.coeffs[-1], -1, self.p)
        return self * inv

    def __str__(self) -> str:
        return format_poly(self)


def _schoolbook(a: List[int], b: List[int], p: int) -> List[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] += ai * bj
    return [v % p for v in out]


def _add_into(dst: List[int], src: List[int], offset: int) -> None:
    for i, v in enumerate(src):
        dst[offset + i] += v


def _mul(a: List[int], b: List[int], p: int) -> List[int]:
    if min(len(a), len(b)) <= KARATSUBA_THRESHOLD:
        return _schoolbook(a, b, p)
    half = max(len(a), len(b)) // 2
    a0, a1 = a[:half], a[half:] or [0]
    b0, b1 = b[:half], b[half:] or [0]
    z0 = _mul(a0, b0, p)
    z2 = _mul(a1, b1, p)
    sa = [(x + y) % p for x, y in _zip_pad(a0, a1)]
    sb = [(x + y) % p for x, y in _zip_pad(b0, b1)]
    z1 = _mul(sa, sb, p)
    for i, v in enumerate(z0):
        z1[i] -= v
    for i, v in enumerate(z2):
        z1[i] -= v
    out = [0] * (len(a) + len(b) - 1 + 2 * half)
    _add_into(out, z0, 0)
    _add_into(out, z1, half)
    _add_into(out, z2, 2 * half)
    return [v % p for v in out[:len(a) + len(b) - 1]]


def _zip_pad(u: List[int], v: List[int]):
    n = max(len(u), len(v))
    return zip(u + [0] * (n - len(u)), v + [0] * (n - len(v)))


def poly_arith(a: PolyOverFp, b: PolyOverFp, op: str) -> PolyOverFp:
    """Ring operation ``op`` in {"add", "sub", "mul"}."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise InvalidInputError(f"unknown polynomial operation {op!r}")


def poly_divmod(a: PolyOverFp, b: PolyOverFp) -> Tuple[PolyOverFp, PolyOverFp]:
    """Euclidean division a = q*b + r with deg r < deg b."""
    a._check(b)
    if b.is_zero():
        raise PolynomialDivisionError("division by the zero polynomial")
    p = a.p
    if a.degree < b.degree:
        return PolyOverFp.zero(p), a
    r = list(a.coeffs)
    db = b.degree
    inv = pow(b.coeffs[-1], -1, p)
    bc = b.coeffs
    q = [0] * (a.degree - db + 1)
    for shift in range(a.degree - db, -1, -1):
        lead = r[shift + db] % p
        if lead:
            f = (lead * inv) % p
            q[shift] = f
            for j in range(db + 1):
                r[shift + j] = (r[shift + j] - f * bc[j]) % p
    return PolyOverFp._raw(q, p), PolyOverFp._raw(r[:db], p)


def poly_gcd(a: PolyOverFp, b: PolyOverFp) -> PolyOverFp:
    """Monic gcd by Euclid's algorithm."""
    a._check(b)
    if a.is_zero() and b.is_zero():
        raise InvalidInputError("gcd(0, 0) is undefined")
    while not b.is_zero():
        a, b = b, poly_divmod(a, b)[1]
    return a.monic()


def poly_pow(a: PolyOverFp, k: int) -> PolyOverFp:
    """a^k by binary exponentiation; a^0 = 1."""
    if k < 0:
        raise InvalidInputError(f"exponent must be >= 0, got {k}")
    if a.degree > 0 and a.degree * k > MAX_DEGREE:
        raise ResourceCapError(f"degree {a.degree}*{k} exceeds 2^40")
    result = PolyOverFp.one(a.p)
    base = a
    while k:
        if k & 1:
            result = result * base
        k >>= 1
        if k:
            base = base * base
    return result


def int_to_poly(n: int, p: int) -> PolyOverFp:
    """The polynomial whose coefficient j is the base-p digit n_j."""
    PrimeModulus(p)
    return PolyOverFp(p, digits_base(n, p).digits)


def poly_to_int(a: PolyOverFp) -> int:
    """Evaluate at X = p; inverse of ``int_to_poly``."""
    return int(from_digits(a.coeffs, a.p))


def divides(d: PolyOverFp, a: PolyOverFp) -> bool:
    return poly_divmod(a, d)[1].is_zero()


def parse_poly(text: str, p: int) -> PolyOverFp:
    text = text.strip()
    if not text:
        return PolyOverFp.zero(p)
    try:
        coeffs = [int(tok) for tok in text.split(",")]
    except ValueError:
        raise InvalidInputError(f"bad polynomial text {text!r}") from None
    return PolyOverFp.make(coeffs, p)


def parse_poly_list(text: str, p: int) -> List[PolyOverFp]:
    return [parse_poly(part, p) for part in text.split(";")]


def format_poly(a: PolyOverFp) -> str:
    return ",".join(str(c) for c in a.coeffs) if a.coeffs else "0"
