"""
Close pairs of the Halton sequence.

For k >= 1 the builder picks balanced c_j, sets

    M = b_d^r b_2^(r c_2 b_1^k),  N = ceil((b_1 + 2) M^d / b_1^k),
    l = floor(log_{b_1}(M / b_1^k)),

and the indices n = (b_1^k - 1) b_1^(l+1), m = n + (b_1 + 1) b_1^l prod_j b_j^(r c_j b_1^k).
Every quantity is an exact integer; l comes from integer comparisons only.
The verifier checks the per-coordinate bounds on exact digit vectors and,
once b_1^k >= 2 (b_1 + 2) b_d^(d r), the inequality chain that ends in

    ||x_n - x_m|| <= sqrt(d) b_d^(2r) C^(-1/d) N^(-1/d) (log N)^(-1/(d(d-1))).
"""
from __future__ import annotations

import logging
import math
from fractions import Fraction
from typing import List

from gmpy2 import mpz

from algebra.digits import digits_base
from certificates.dirichlet import dirichlet_coefficients
from certificates.lemmas import close_pair_indices
from certificates.logdomain import ChainCheck, exact_check, log_check, log_int, log_sum_exp
from certificates.model import CertificateVerdict, CoordinateBound, Family, PairCertificate
from sequences.halton import IntegerBaseSet, radical_inverse
from utils.config import get_config
from utils.errors import CertificateInvalidError, InvalidInputError, ResourceCapError

logger = logging.getLogger(__name__)

# exact rational gaps are also computed below this index size
EXACT_GAP_BITS = 4096


def floor_log_ratio(M: int, b: int, k: int) -> int:
    """Largest l with b^(l+k) <= M, found by exact comparisons around a float estimate."""
    M = mpz(M)
    bb = mpz(b)
    if bb ** k > M:
        raise InvalidInputError(f"M is smaller than {b}^{k}")
    ell = max(0, int(log_int(M) / math.log(b)) - k)
    while ell > 0 and bb ** (ell + k) > M:
        ell -= 1
    while bb ** (ell + k + 1) <= M:
        ell += 1
    return ell


def halton_close_pair(bases: IntegerBaseSet, k: int) -> PairCertificate:
    """
    Build the close-pair certificate for the Halton sequence in ``bases`` at order k.

    Args:
        bases: Pairwise coprime bases, d >= 2
        k: Order, >= 1 (the inequality chain needs b_1^k >= 2 (b_1 + 2) b_d^(d r))

    Returns:
        Unverified PairCertificate with the balancing checks already in its chain
    """
    if bases.d < 2:
        raise InvalidInputError("close pairs need d >= 2")
    if k < 1:
        raise InvalidInputError(f"k must be >= 1, got {k}")
    b = bases.bases
    b1, b2, bd, d = b[0], b[1], b[-1], bases.d
    coeffs = dirichlet_coefficients(bases, k)
    r = coeffs.r
    exps = coeffs.exponents(b1)
    m_bits = r * math.log2(bd) + exps[0] * math.log2(b2)
    est_bits = max(d * m_bits, sum(e * math.log2(bj) for bj, e in zip(b[1:], exps)) + 2 * m_bits)
    cap = get_config().index_bit_cap
    if est_bits > cap:
        raise ResourceCapError(f"certificate needs ~{int(est_bits)} bits, cap is {cap}")

    M = mpz(bd) ** r * mpz(b2) ** exps[0]
    num = (b1 + 2) * M ** d
    den = mpz(b1) ** k
    N = -(-num // den)
    ell = floor_log_ratio(M, b1, k)
    n, m = close_pair_indices(b1, k, ell, list(zip(b[1:], exps)))
    condition = mpz(b1) ** k >= 2 * (b1 + 2) * mpz(bd) ** (d * r)
    logger.info("[Certify] halton %s k=%d: c=%s l=%d, m has %d bits", b, k, coeffs.c, ell, m.bit_length())
    return PairCertificate(
        family=Family.HALTON,
        params={"bases": list(b), "d": d},
        n=n, m=m, N=int(N),
        r=r, k=k, c=coeffs.c, ell=ell, M=int(M),
        condition_met=bool(condition),
        chain=list(coeffs.checks),
    )


def _first_coordinate(cert: PairCertificate, b1: int) -> CoordinateBound:
    ell, k = cert.ell, cert.k
    dn = digits_base(cert.n, b1)
    dm = digits_base(cert.m, b1)
    n_shape = (len(dn) == ell + k + 1
               and all(dn.digit(i) == 0 for i in range(ell + 1))
               and all(dn.digit(i) == b1 - 1 for i in range(ell + 1, ell + k + 1)))
    m_shape = (all(dm.digit(i) == 0 for i in range(ell))
               and dm.digit(ell) == 1
               and all(dm.digit(i) == 0 for i in range(ell + 1, ell + k + 1)))
    bound = CoordinateBound(
        coord=1, base=str(b1),
        shared_digits=dn.shared_prefix(dm),
        required_digits=ell,
        bound_log=math.log(2) - (ell + k + 1) * math.log(b1),
        bound_exact=f"2*{b1}^-{ell + k + 1}",
        verified=n_shape and m_shape,
    )
    if max(cert.m.bit_length(), 1) <= EXACT_GAP_BITS:
        gap = abs(radical_inverse(cert.n, b1).exact - radical_inverse(cert.m, b1).exact)
        bound.gap_exact = str(gap)
        bound.verified = bound.verified and gap <= Fraction(2, b1 ** (ell + k + 1))
    return bound


def _other_coordinate(cert: PairCertificate, j: int, bj: int, e: int) -> CoordinateBound:
    shared = digits_base(cert.n, bj).shared_prefix(digits_base(cert.m, bj))
    bound = CoordinateBound(
        coord=j, base=str(bj),
        shared_digits=shared,
        required_digits=e,
        bound_log=-e * math.log(bj),
        bound_exact=f"{bj}^-{e}",
        verified=shared == -1 or shared >= e,
    )
    if max(cert.m.bit_length(), 1) <= EXACT_GAP_BITS:
        gap = abs(radical_inverse(cert.n, bj).exact - radical_inverse(cert.m, bj).exact)
        bound.gap_exact = str(gap)
        bound.verified = bound.verified and gap <= Fraction(1, bj ** e)
    return bound


def verify_pair_digit_agreement(cert: PairCertificate, strict: bool = True) -> List[CoordinateBound]:
    """
    Per-coordinate bounds from exact digit vectors.

    Base b_1: n has l+1 zeros then k digits b_1 - 1, m has l zeros, a one and
    k zeros, so the gap is at most 2 b_1^(-(l+k+1)). Base b_j (j >= 2): n and
    m share their first r c_j b_1^k digits, so the gap is at most b_j^(-r c_j b_1^k).
    """
    if cert.family is not Family.HALTON:
        raise InvalidInputError(f"not a halton certificate: {cert.family.value}")
    b = tuple(cert.params["bases"])
    exps = tuple(cert.r * cj * b[0] ** cert.k for cj in cert.c)
    bounds = [_first_coordinate(cert, b[0])]
    for j, (bj, e) in enumerate(zip(b[1:], exps), start=2):
        bounds.append(_other_coordinate(cert, j, bj, e))
    cert.coord_bounds = bounds
    bad = [cb.coord for cb in bounds if not cb.verified]
    if bad:
        cert.verdict = CertificateVerdict.FAIL
        if strict:
            raise CertificateInvalidError(f"digit bounds fail in coordinates {bad}")
    logger.debug("[Certify] digit agreement %s", [cb.shared_digits for cb in bounds])
    return bounds


def _chain(cert: PairCertificate) -> List[ChainCheck]:
    b = tuple(cert.params["bases"])
    b1, b2, bd, d, r, k = b[0], b[1], b[-1], len(b), cert.r, cert.k
    log_m = log_int(cert.M)
    log_n = log_int(cert.N)
    ll_n = math.log(log_n)
    log_c = -math.log(2) - math.log(b1 + 2) - math.log(r * d * math.log(b2)) / (d - 1)
    checks = [
        log_check("b_1^k >= (log N / (r d log b_2))^(1/(d-1))",
                  (ll_n - math.log(r * d * math.log(b2))) / (d - 1), k * math.log(b1)),
        log_check("C N (log N)^(1/(d-1)) <= M^d", log_c + log_n + ll_n / (d - 1), d * log_m),
        exact_check("2 b_1^-(l+k+1) <= 2/M", mpz(b1) ** (cert.ell + k + 1) >= cert.M,
                    cert.coord_bounds[0].bound_log, math.log(2) - log_m),
    ]
    scale = 2 * r * math.log(bd) - log_m
    for cb in cert.coord_bounds:
        checks.append(log_check(f"coordinate {cb.coord} bound <= b_d^(2r)/M", cb.bound_log, scale))
    dist = 0.5 * log_sum_exp(2 * cb.bound_log for cb in cert.coord_bounds)
    checks.append(log_check("||x_n - x_m|| <= sqrt(d) b_d^(2r)/M", dist, 0.5 * math.log(d) + scale))
    final = (0.5 * math.log(d) + 2 * r * math.log(bd) - log_c / d - log_n / d
             - ll_n / (d * (d - 1)))
    checks.append(log_check(
        "||x_n - x_m|| <= sqrt(d) b_d^(2r) C^(-1/d) N^(-1/d) (log N)^(-1/(d(d-1)))", dist, final))
    return checks


def verify_certificate_chain(cert: PairCertificate, strict: bool = True) -> CertificateVerdict:
    """
    Check 0 <= n < m < N and, when b_1^k >= 2 (b_1 + 2) b_d^(d r), the full chain.

    Without the condition only the unconditional bounds are certified and the
    verdict is UNCONDITIONAL.
    """
    if not cert.coord_bounds:
        verify_pair_digit_agreement(cert, strict=strict)
    log_n_idx = log_int(cert.n) if cert.n > 0 else 0.0
    chain = [ch for ch in cert.chain if ch.name.startswith("balance")]
    chain.append(exact_check("0 <= n < m", 0 <= cert.n < cert.m, log_n_idx, log_int(cert.m)))
    chain.append(exact_check("m < N", cert.m < cert.N, log_int(cert.m), log_int(cert.N)))
    if cert.condition_met:
        chain.extend(_chain(cert))
    else:
        cert.notes.append("b_1^k < 2 (b_1 + 2) b_d^(d r): unconditional bounds only")
    cert.chain = chain
    ok = all(cb.verified for cb in cert.coord_bounds) and all(ch.passed for ch in chain)
    if not ok:
        cert.verdict = CertificateVerdict.FAIL
        if strict:
            raise CertificateInvalidError(f"certificate checks fail: {cert.failed_checks()}")
    elif cert.condition_met:
        cert.verdict = CertificateVerdict.PASS
    else:
        cert.verdict = CertificateVerdict.UNCONDITIONAL
    logger.info("[Certify] verdict %s", cert.verdict.value)
    return cert.verdict
