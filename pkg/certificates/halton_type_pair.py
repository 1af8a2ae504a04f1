"""
Close pairs of three Halton-type families over F_p.

  case 1: bases X+a, X+a+1 (d = 2); m = p^w, N = p^m,
          n_1(X) = 1, n_2(X) = (p-1) sum_{j=1}^{m-1} b_2(X)^j
  case 2: p = 2, bases X, X+1, X^2+X+1 (d = 3); m = 2^w, N = 2^(2m),
          n_1(X) = X, n_2(X) = 1 + b_2(X) sum_{j=1}^{m-1} b_3(X)^j
  case 3: bases X, X-1, ..., X-(p-1) (d = p, the Faure sequence);
          m = (p-1) p^w, N = p^m, n_1(X) = 1, n_2(X) = (p-1) sum_{j=1}^{m-1} X^j

Each certificate is checked with exact polynomial identities and exact
rational coordinates, ending in q(P_N) <= 1/2 ||x_{n_1} - x_{n_2}|| <= c N^(-1/(d-1)).
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple

from algebra.ffpoly import PolyOverFp, divides, format_poly, poly_pow, poly_to_int
from algebra.primes import PrimeModulus
from certificates.lemmas import check_poly_divisibility_lemma, root_product_identity
from certificates.logdomain import ChainCheck, exact_check
from certificates.model import CertificateVerdict, CoordinateBound, Family, PairCertificate
from sequences.polynomial import PolyBaseSet, faure_bases, poly_radical_inverse, shared_digit_prefix
from utils.config import get_config
from utils.errors import CertificateInvalidError, InvalidInputError, ResourceCapError

logger = logging.getLogger(__name__)

CASE_FAMILIES = {1: Family.HALTON_TYPE_CASE1, 2: Family.HALTON_TYPE_CASE2, 3: Family.FAURE}


@dataclass(frozen=True)
class CaseSetup:
    """Bases, indices and the squared constant (2c)^2 of one construction."""
    bases: PolyBaseSet
    m: int
    N: int
    n_exp: int                 # N = p^n_exp
    n1: PolyOverFp
    n2: PolyOverFp
    two_c_sq: int              # (2c)^2, e.g. 1 + p^2 for case 1
    rate_power: Fraction       # ||x_{n1} - x_{n2}||^2 <= two_c_sq * N^(-rate_power)


def _geometric(base: PolyOverFp, count: int) -> PolyOverFp:
    """sum_{j=1}^{count} base^j by Horner's rule."""
    acc = PolyOverFp.zero(base.p)
    one = PolyOverFp.one(base.p)
    for _ in range(count):
        acc = (acc + one) * base
    return acc


def _check_size(p: int, digits: int) -> None:
    bits = digits * math.log2(p)
    cap = get_config().index_bit_cap
    if bits > cap:
        raise ResourceCapError(f"indices of ~{int(bits)} bits exceed cap {cap}")


def case_setup(case: int, p: Optional[int] = None, w: int = 1, a: int = 0) -> CaseSetup:
    """Construction parameters of ``case`` (1, 2 or 3)."""
    if w < 1:
        raise InvalidInputError(f"w must be >= 1, got {w}")
    if case == 1:
        p = 2 if p is None else p
        PrimeModulus(p)
        if not 0 <= a < p:
            raise InvalidInputError(f"shift a must lie in [0, {p}), got {a}")
        b1, b2 = PolyOverFp.linear(a, p), PolyOverFp.linear(a + 1, p)
        m = p ** w
        _check_size(p, m)
        n2 = _geometric(b2, m - 1) * (p - 1)
        return CaseSetup(PolyBaseSet(p, (b1, b2)), m, p ** m, m, PolyOverFp.one(p), n2,
                         1 + p * p, Fraction(2))
    if case == 2:
        if p not in (None, 2):
            raise InvalidInputError("case 2 is defined over F_2 only")
        p = 2
        b1, b2, b3 = PolyOverFp.x(2), PolyOverFp.linear(1, 2), PolyOverFp.make([1, 1, 1], 2)
        m = 2 ** w
        _check_size(2, 2 * m)
        n2 = PolyOverFp.one(2) + b2 * _geometric(b3, m - 1)
        return CaseSetup(PolyBaseSet(2, (b1, b2, b3)), m, 2 ** (2 * m), 2 * m, b1, n2, 6, Fraction(1))
    if case == 3:
        p = 3 if p is None else p
        bases = faure_bases(p)
        m = (p - 1) * p ** w
        _check_size(p, m)
        n2 = _geometric(PolyOverFp.x(p), m - 1) * (p - 1)
        return CaseSetup(bases, m, p ** m, m, PolyOverFp.one(p), n2,
                         p * p + p - 1, Fraction(2, p - 1))
    raise InvalidInputError(f"case must be 1, 2 or 3, got {case}")


def _difference_facts(case: int, s: CaseSetup, w: int) -> List[Tuple[str, bool]]:
    p = s.bases.p
    b = s.bases.bases
    diff = s.n2 - s.n1
    if case == 1:
        return [("n_2(X) - n_1(X) == (p-1) b_1(X)^(m-1)", diff == poly_pow(b[0], s.m - 1) * (p - 1))]
    if case == 2:
        return [("n_2(X) - n_1(X) == b_1(X)^(m-1) b_2(X)^m",
                 diff == poly_pow(b[0], s.m - 1) * poly_pow(b[1], s.m))]
    q = p ** w
    facts = [("prod_{c != 0} (X - c)^(p^w) == X^m - 1", root_product_identity(p, w)),
             ("b_2(X)^(p^w - 1) | n_2(X) - n_1(X)", divides(poly_pow(b[1], q - 1), diff))]
    for j in range(2, p):
        facts.append((f"b_{j + 1}(X)^(p^w) | n_2(X) - n_1(X)", divides(poly_pow(b[j], q), diff)))
    return facts


def _lemma_levels(case: int, s: CaseSetup, w: int) -> List[Optional[int]]:
    """Per coordinate: the power l used with the proximity lemma, or None for a direct value."""
    p = s.bases.p
    if case == 1:
        return [s.m - 1, None]
    if case == 2:
        return [s.m - 1, s.m, None]
    return [None, p ** w - 1] + [p ** w] * (p - 2)


def _coordinate(j: int, b: PolyOverFp, n1: int, n2: int, level: Optional[int], direct: Fraction) -> CoordinateBound:
    u = poly_radical_inverse(n1, b)
    v = poly_radical_inverse(n2, b)
    gap = abs(u.exact - v.exact)
    shared = shared_digit_prefix(u.expansion, v.expansion)
    if level is None:
        bound, verified, required = direct, gap == direct, 0
    else:
        lemma = check_poly_divisibility_lemma(n1, n2, b, level)
        bound = lemma.bound
        verified = lemma.applicable and lemma.holds
        required = level
    return CoordinateBound(
        coord=j, base=str(b), shared_digits=shared, required_digits=required,
        bound_log=math.log(bound.numerator) - math.log(bound.denominator),
        bound_exact=str(bound), gap_exact=str(gap), verified=verified,
    )


def verify_halton_type_pair(cert: PairCertificate, strict: bool = True) -> CertificateVerdict:
    """Re-derive the construction from ``cert.params`` and check every exact fact."""
    case = int(cert.params["case"])
    w = int(cert.params["w"])
    s = case_setup(case, int(cert.params["p"]), w, int(cert.params.get("a", 0)))
    n1, n2 = poly_to_int(s.n1), poly_to_int(s.n2)
    chain: List[ChainCheck] = []
    log_n = s.n_exp * math.log(s.bases.p)
    same = (n1, n2, s.N) == (cert.n, cert.m, cert.N)
    chain.append(exact_check("indices match the construction", same, 0.0, 0.0))
    chain.append(exact_check("0 <= n_1 < n_2 < N", 0 <= n1 < n2 < s.N,
                             math.log(n2), log_n))
    for name, holds in _difference_facts(case, s, w):
        chain.append(exact_check(name, holds, 0.0, 0.0))
    # the one coordinate not covered by the lemma differs by exactly 1/N
    direct = Fraction(1, s.N)
    bounds = [_coordinate(j, b, n1, n2, lvl, direct)
              for j, (b, lvl) in enumerate(zip(s.bases.bases, _lemma_levels(case, s, w)), start=1)]
    dist_sq = sum((Fraction(cb.gap_exact) ** 2 for cb in bounds), Fraction(0))
    limit = Fraction(s.two_c_sq) / _power_of_n(s, s.rate_power)
    lhs_log = 0.5 * (math.log(dist_sq.numerator) - math.log(dist_sq.denominator)) if dist_sq else -math.inf
    rhs_log = 0.5 * math.log(s.two_c_sq) - float(s.rate_power) * log_n / 2
    chain.append(exact_check("||x_n1 - x_n2|| <= 2c N^(-1/(d-1))", dist_sq <= limit, lhs_log, rhs_log))
    cert.coord_bounds = bounds
    cert.chain = chain
    ok = all(cb.verified for cb in bounds) and all(ch.passed for ch in chain)
    cert.verdict = CertificateVerdict.PASS if ok else CertificateVerdict.FAIL
    if not ok and strict:
        raise CertificateInvalidError(f"halton-type certificate fails: {cert.failed_checks()}")
    logger.info("[Certify] case %d p=%d w=%d: pair (%d, %d), N=%d, verdict %s",
                case, s.bases.p, w, n1, n2, s.N, cert.verdict.value)
    return cert.verdict


def _power_of_n(s: CaseSetup, power: Fraction) -> Fraction:
    """N^power, which is an integer power of p for every case."""
    exp = s.n_exp * power
    if exp.denominator != 1:
        raise InvalidInputError("N^power is not an integer power of p")
    return Fraction(s.bases.p ** int(exp))


def halton_type_close_pair(case: int, p: Optional[int] = None, w: int = 1, a: int = 0,
                           verify: bool = True) -> PairCertificate:
    """
    Build (and by default verify) the close pair of one Halton-type family.

    Args:
        case: 1, 2 or 3
        p: Prime (case 1 defaults to 2, case 3 to 3, case 2 is always 2)
        w: Order, >= 1
        a: Shift of case 1
        verify: Run verify_halton_type_pair with strict checking
    """
    s = case_setup(case, p, w, a)
    params = {"case": case, "p": s.bases.p, "w": w, "d": s.bases.d,
              "polys": ";".join(format_poly(b) for b in s.bases.bases),
              "c": _constant_text(case, s.bases.p)}
    if case == 1:
        params["a"] = a
    cert = PairCertificate(family=CASE_FAMILIES[case], params=params,
                           n=poly_to_int(s.n1), m=poly_to_int(s.n2), N=s.N)
    if verify:
        verify_halton_type_pair(cert, strict=True)
    return cert


def _constant_text(case: int, p: int) -> str:
    return {1: f"sqrt({1 + p * p})/2", 2: "sqrt(6)/2", 3: f"sqrt({p * p + p - 1})/2"}[case]
