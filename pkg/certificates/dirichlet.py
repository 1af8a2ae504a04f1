"""
Simultaneous approximation coefficients for the integer close pair.

For alpha_j = log b_2 / log b_j (j >= 3) we look for the smallest c_2 in
[1, b_1^(k(d-2))] whose nearest integers c_j to c_2 alpha_j all lie within
b_1^(-k). Such c_2 always exists. The balancing inequalities

    b_d^(-r) b_2^(r c_2 b_1^k) <= b_j^(r c_j b_1^k) <= b_d^r b_2^(r c_2 b_1^k)

are then checked with exact integers while the exponents are small enough,
and in the log domain otherwise.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Tuple

import mpmath as mp
import numpy as np
from gmpy2 import mpz

from algebra.primes import euler_totient
from certificates.logdomain import ChainCheck, exact_check, log_check
from sequences.halton import IntegerBaseSet
from utils.config import get_config
from utils.errors import CertificateInvalidError, InvalidInputError, ResourceCapError

logger = logging.getLogger(__name__)

SEARCH_BLOCK = 1 << 16
RESIDUAL_DPS = 60


@dataclass
class DirichletCoefficients:
    """c_2, ..., c_d for one (bases, k) with the residual max_j |c_2 alpha_j - c_j|."""
    k: int
    r: int
    c: Tuple[int, ...]              # (c_2, c_3, ..., c_d)
    residual: float
    checks: List[ChainCheck] = field(default_factory=list)

    @property
    def c2(self) -> int:
        return self.c[0]

    @property
    def balanced(self) -> bool:
        return all(ch.passed for ch in self.checks)

    def exponents(self, b1: int) -> Tuple[int, ...]:
        """E_j = r c_j b_1^k for j = 2..d."""
        scale = self.r * b1 ** self.k
        return tuple(scale * cj for cj in self.c)

    def to_dict(self) -> Dict:
        return {"k": self.k, "r": self.r, "c": list(self.c), "residual": self.residual,
                "checks": [ch.to_dict() for ch in self.checks]}


def _nearest(values: np.ndarray) -> np.ndarray:
    # ties round down
    return np.ceil(values - 0.5)


def _residual_precise(c2: int, cs: Tuple[int, ...], bases: Tuple[int, ...]) -> float:
    with mp.workdps(RESIDUAL_DPS):
        b2 = mp.log(bases[1])
        worst = mp.mpf(0)
        for bj, cj in zip(bases[2:], cs):
            worst = max(worst, abs(c2 * b2 / mp.log(bj) - cj))
        return float(worst)


def _search(bases: Tuple[int, ...], k: int) -> Tuple[int, Tuple[int, ...], float]:
    b1 = bases[0]
    upper = b1 ** (k * (len(bases) - 2))
    cap = get_config().dirichlet_cap
    if upper > cap:
        raise ResourceCapError(f"c_2 range {upper} exceeds cap {cap}")
    alphas = np.array([math.log(bases[1]) / math.log(bj) for bj in bases[2:]])
    threshold = float(b1) ** (-k)
    for start in range(1, upper + 1, SEARCH_BLOCK):
        c2s = np.arange(start, min(start + SEARCH_BLOCK, upper + 1), dtype=np.float64)
        prods = c2s[:, None] * alphas[None, :]
        cjs = np.clip(_nearest(prods), 0.0, c2s[:, None])
        residual = np.abs(prods - cjs).max(axis=1)
        for i in np.flatnonzero(residual <= threshold):
            c2 = int(c2s[i])
            cs = tuple(int(v) for v in cjs[i])
            precise = _residual_precise(c2, cs, bases)
            if precise <= threshold:
                return c2, cs, precise
            logger.debug("[Dirichlet] c_2=%d rejected after high-precision recheck", c2)
    raise CertificateInvalidError(
        f"no c_2 <= {upper} approximates alpha within {threshold}; numeric defect")


def balance_checks(bases: Tuple[int, ...], r: int, exps: Tuple[int, ...]) -> List[ChainCheck]:
    """Both sides of the balancing inequality for every j >= 2."""
    bd = bases[-1]
    e2 = exps[0]
    bits = e2 * math.log2(bases[1])
    checks: List[ChainCheck] = []
    ld, l2 = math.log(bd), math.log(bases[1])
    if bits <= get_config().exact_exponent_bits:
        big2 = mpz(bases[1]) ** e2
        bdr = mpz(bd) ** r
        for j, (bj, ej) in enumerate(zip(bases[1:], exps), start=2):
            bigj = mpz(bj) ** ej
            lhs_log, mid_log = e2 * l2 - r * ld, ej * math.log(bj)
            checks.append(exact_check(f"balance: b_d^-r b_2^E_2 <= b_{j}^E_{j}", big2 <= bdr * bigj,
                                      lhs_log, mid_log))
            checks.append(exact_check(f"balance: b_{j}^E_{j} <= b_d^r b_2^E_2", bigj <= bdr * big2,
                                      mid_log, e2 * l2 + r * ld))
        return checks
    for j, (bj, ej) in enumerate(zip(bases[1:], exps), start=2):
        mid_log = ej * math.log(bj)
        checks.append(log_check(f"balance: b_d^-r b_2^E_2 <= b_{j}^E_{j}", e2 * l2 - r * ld, mid_log))
        checks.append(log_check(f"balance: b_{j}^E_{j} <= b_d^r b_2^E_2", mid_log, e2 * l2 + r * ld))
    return checks


def dirichlet_coefficients(bases: IntegerBaseSet, k: int) -> DirichletCoefficients:
    """
    Smallest c_2 (and the matching c_3..c_d) with max_j |c_2 alpha_j - c_j| <= b_1^(-k).

    Args:
        bases: At least two integer bases
        k: Approximation order, >= 1

    Returns:
        DirichletCoefficients with the balancing checks attached
    """
    if bases.d < 2:
        raise InvalidInputError("coefficients need d >= 2")
    if k < 1:
        raise InvalidInputError(f"k must be >= 1, got {k}")
    b = bases.bases
    r = euler_totient(b[0])
    if bases.d == 2:
        c2, cs, residual = 1, (), 0.0
    else:
        c2, cs, residual = _search(b, k)
    coeffs = DirichletCoefficients(k=k, r=r, c=(c2,) + cs, residual=residual)
    coeffs.checks = balance_checks(b, r, coeffs.exponents(b[0]))
    logger.debug("[Dirichlet] bases=%s k=%d c=%s residual=%.3g", b, k, coeffs.c, residual)
    if not coeffs.balanced:
        raise CertificateInvalidError(f"balancing inequalities fail for c={coeffs.c}")
    return coeffs
