"""
Number-theoretic and polynomial facts the close-pair certificates rest on.

- lifting: q^(k+1) divides p^(q^k) - 1 whenever p = 1 (mod q)
- integer close pairs: the digit bounds of n = (b_1^k - 1) b_1^(l+1) and
  m = n + (b_1 + 1) b_1^l prod_j b_j^(r c_j b_1^k)
- polynomial proximity: b(X)^l | n(X) - m(X) puts x_n and x_m within p^(-e l)
- the root-product identity prod_{c != 0} (X - c)^(p^w) = X^((p-1) p^w) - 1
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from gmpy2 import mpz

from algebra.ffpoly import PolyOverFp, divides, format_poly, int_to_poly, poly_pow
from algebra.primes import PrimeModulus, euler_totient
from sequences.halton import IntegerBaseSet, radical_inverse
from sequences.polynomial import digit_polys_agree, poly_radical_inverse
from utils.errors import InvalidInputError

logger = logging.getLogger(__name__)

MAX_REPORTED_FAILURES = 20


def check_lifting_lemma(p: int, q: int, k: int) -> bool:
    """True iff p^(q^k) = 1 (mod q^(k+1)), by modular exponentiation."""
    if p < 2 or q < 2:
        raise InvalidInputError(f"p and q must be >= 2, got p={p}, q={q}")
    if k < 0:
        raise InvalidInputError(f"k must be >= 0, got {k}")
    if p % q != 1:
        raise InvalidInputError(f"{p} is not 1 mod {q}")
    return pow(p, q ** k, q ** (k + 1)) == 1


@dataclass
class SweepReport:
    """Counts of an exhaustive property sweep and the first few failing cases."""
    name: str
    checked: int = 0
    failed: int = 0
    failures: List[Dict] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.failed == 0

    def fail(self, case: Dict) -> None:
        self.failed += 1
        if len(self.failures) < MAX_REPORTED_FAILURES:
            self.failures.append(case)

    def to_dict(self) -> Dict:
        return {"name": self.name, "checked": self.checked, "failed": self.failed,
                "passed": self.passed, "failures": self.failures}


def lifting_lemma_sweep(q_max: int = 20, p_max: int = 200, k_max: int = 8) -> SweepReport:
    """Every q in [2, q_max], p in [q+1, p_max] with p = 1 (mod q), and k <= k_max."""
    report = SweepReport("lifting")
    for q in range(2, q_max + 1):
        for p in range(q + 1, p_max + 1):
            if p % q != 1:
                continue
            for k in range(k_max + 1):
                report.checked += 1
                if not check_lifting_lemma(p, q, k):
                    report.fail({"p": p, "q": q, "k": k})
    return report


def close_pair_indices(b1: int, k: int, ell: int, exponents: Sequence[Tuple[int, int]]) -> Tuple[int, int]:
    """
    n = (b_1^k - 1) b_1^(l+1) and m = n + (b_1 + 1) b_1^l prod b_j^(E_j).

    Args:
        b1: First base
        k: Number of trailing b_1 - 1 digits of n
        ell: Leading zero digits of n minus one
        exponents: (b_j, E_j) for j >= 2, where E_j = r c_j b_1^k
    """
    b = mpz(b1)
    n = (b ** k - 1) * b ** (ell + 1)
    prod = mpz(1)
    for bj, e in exponents:
        prod *= mpz(bj) ** e
    m = n + (b + 1) * b ** ell * prod
    return int(n), int(m)


@dataclass
class CloseBoundsReport:
    """Exact per-coordinate gaps of an integer close pair against their bounds."""
    bases: Tuple[int, ...]
    k: int
    ell: int
    c: Tuple[int, ...]
    n: int
    m: int
    gaps: Tuple[Fraction, ...]
    bounds: Tuple[Fraction, ...]
    first_coordinate_shape: bool  # phi_{b_1}(n) and phi_{b_1}(m) have the expected form

    @property
    def passed(self) -> bool:
        return self.first_coordinate_shape and all(g <= b for g, b in zip(self.gaps, self.bounds))


def close_pair_bounds(bases: IntegerBaseSet, k: int, ell: int, c: Sequence[int], r: Optional[int] = None) -> CloseBoundsReport:
    """
    Check both digit bounds of the integer close pair for arbitrary l, k and c_j.

    |phi_{b_j}(n) - phi_{b_j}(m)| <= b_j^(-r c_j b_1^k) for j >= 2 and
    |phi_{b_1}(n) - phi_{b_1}(m)| <= 2 b_1^(-(l+k+1)), all as exact rationals.
    """
    if bases.d < 2:
        raise InvalidInputError("close pairs need d >= 2")
    if len(c) != bases.d - 1:
        raise InvalidInputError(f"need {bases.d - 1} coefficients c_2..c_d, got {len(c)}")
    if k < 1 or ell < 1 or any(cj < 0 for cj in c):
        raise InvalidInputError("k and l must be >= 1 and every c_j >= 0")
    b1 = bases.bases[0]
    r = euler_totient(b1) if r is None else r
    exps = [r * cj * b1 ** k for cj in c]
    n, m = close_pair_indices(b1, k, ell, list(zip(bases.bases[1:], exps)))
    gaps: List[Fraction] = []
    bounds: List[Fraction] = []
    xn = radical_inverse(n, b1).exact
    xm = radical_inverse(m, b1).exact
    lo = Fraction(1, b1 ** (ell + 1))
    tail = Fraction(1, b1 ** (ell + k + 1))
    shape = xn == lo - tail and lo <= xm < lo + tail
    gaps.append(abs(xn - xm))
    bounds.append(2 * tail)
    for bj, e in zip(bases.bases[1:], exps):
        gaps.append(abs(radical_inverse(n, bj).exact - radical_inverse(m, bj).exact))
        bounds.append(Fraction(1, bj ** e))
    return CloseBoundsReport(bases.bases, k, ell, tuple(c), n, m, tuple(gaps), tuple(bounds), shape)


def close_pair_bounds_sweep(bases: IntegerBaseSet, k_max: int = 5, ell_max: int = 8, c_max: int = 3) -> SweepReport:
    """close_pair_bounds over every k <= k_max, l <= ell_max and c_j in [1, c_max]."""
    report = SweepReport(f"close-bounds {','.join(map(str, bases.bases))}")
    for k in range(1, k_max + 1):
        for ell in range(1, ell_max + 1):
            for c in itertools.product(range(1, c_max + 1), repeat=bases.d - 1):
                report.checked += 1
                if not close_pair_bounds(bases, k, ell, c).passed:
                    report.fail({"k": k, "ell": ell, "c": list(c)})
    return report


@dataclass
class DivisibilityVerdict:
    """Outcome of the polynomial proximity check for one pair and one base."""
    n: int
    m: int
    base: PolyOverFp
    ell: int
    applicable: bool          # b(X)^l divides n(X) - m(X)
    digits_agree: bool = False
    gap: Fraction = Fraction(0)
    bound: Fraction = Fraction(0)

    @property
    def holds(self) -> bool:
        """Conclusion verified (vacuously true when the hypothesis fails)."""
        return not self.applicable or (self.digits_agree and self.gap <= self.bound)

    def to_dict(self) -> Dict:
        return {
            "n": self.n, "m": self.m, "base": format_poly(self.base), "ell": self.ell,
            "applicable": self.applicable, "digits_agree": self.digits_agree,
            "gap": str(self.gap), "bound": str(self.bound), "holds": self.holds,
        }


def check_poly_divisibility_lemma(n: int, m: int, b: PolyOverFp, ell: int) -> DivisibilityVerdict:
    """
    If b(X)^l divides n(X) - m(X), check that the first l digit polynomials agree
    and |phi_b(n) - phi_b(m)| <= p^(-e l).

    A failed hypothesis is reported as not applicable rather than raised.
    """
    if ell < 1:
        raise InvalidInputError(f"l must be >= 1, got {ell}")
    if b.degree < 1:
        raise InvalidInputError(f"base polynomial {b} must have degree >= 1")
    diff = int_to_poly(n, b.p) - int_to_poly(m, b.p)
    verdict = DivisibilityVerdict(n, m, b, ell, applicable=divides(poly_pow(b, ell), diff))
    if not verdict.applicable:
        logger.debug("[Lemma] %s^%d does not divide n(X) - m(X) for (%d, %d)", b, ell, n, m)
        return verdict
    u = poly_radical_inverse(n, b)
    v = poly_radical_inverse(m, b)
    verdict.digits_agree = digit_polys_agree(u.expansion, v.expansion, ell)
    verdict.gap = abs(u.exact - v.exact)
    verdict.bound = Fraction(1, b.p ** (b.degree * ell))
    return verdict


def root_product_identity(p: int, w: int) -> bool:
    """prod_{c=1}^{p-1} (X - c)^(p^w) == X^((p-1) p^w) - 1 over F_p."""
    PrimeModulus(p)
    if w < 0:
        raise InvalidInputError(f"w must be >= 0, got {w}")
    q = p ** w
    lhs = PolyOverFp.one(p)
    for c in range(1, p):
        lhs = lhs * poly_pow(PolyOverFp.linear(-c, p), q)
    rhs = poly_pow(PolyOverFp.x(p), (p - 1) * q) - PolyOverFp.one(p)
    return lhs == rhs


def frobenius_holds(a: PolyOverFp, b: PolyOverFp, w: int) -> bool:
    """(a + b)^(p^w) == a^(p^w) + b^(p^w)."""
    q = a.p ** w
    return poly_pow(a + b, q) == poly_pow(a, q) + poly_pow(b, q)
