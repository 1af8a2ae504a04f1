"""
Lower-triangular scrambling of digital sequences.

If C n_1 and C n_2 agree in their first w output digits, so do L C n_1 and
L C n_2 for any nonsingular lower-triangular L: output digit i of L y only
reads y_0..y_i. Shared-prefix arguments for close pairs therefore survive
scrambling, and so do the bounds built on them.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from algebra.digits import DigitVector, digits_base
from algebra.ffpoly import poly_to_int
from algebra.primes import PrimeModulus
from certificates.halton_type_pair import case_setup
from sequences.digital import GeneratingMatrix, identity_matrix, pascal_matrix_power
from sequences.halton import RadicalInverse
from utils.config import get_config
from utils.errors import InvalidInputError, ResourceCapError

logger = logging.getLogger(__name__)


def _prefix_at_least(shared: int, other: int) -> bool:
    """shared >= other, with -1 meaning "identical" (longer than any prefix)."""
    if shared == -1:
        return True
    if other == -1:
        return False
    return shared >= other


@dataclass
class PairAgreement:
    n1: int
    n2: int
    shared_before: int      # under C (-1: identical outputs)
    shared_after: int       # under L C

    @property
    def preserved(self) -> bool:
        return _prefix_at_least(self.shared_after, self.shared_before)

    def to_dict(self) -> Dict:
        return {"n1": self.n1, "n2": self.n2, "shared_before": self.shared_before,
                "shared_after": self.shared_after, "preserved": self.preserved}


@dataclass
class ScrambleVerdict:
    pairs: List[PairAgreement] = field(default_factory=list)

    @property
    def preserved(self) -> bool:
        return all(pa.preserved for pa in self.pairs)

    def to_dict(self) -> Dict:
        return {"preserved": self.preserved, "pairs": [pa.to_dict() for pa in self.pairs]}


def check_scrambler(L: GeneratingMatrix) -> None:
    """Raise InvalidInputError unless L is square, lower triangular and nonsingular."""
    if L.rows != L.cols:
        raise InvalidInputError(f"scrambling matrix must be square, got {L.rows}x{L.cols}")
    if not L.is_lower_triangular():
        raise InvalidInputError("scrambling matrix must be lower triangular")
    if not np.diagonal(L.entries).all():
        raise InvalidInputError("scrambling matrix is singular (zero on the diagonal)")


def _output_digits(matrix: GeneratingMatrix, n: int) -> DigitVector:
    ys = matrix.apply(digits_base(n, matrix.p).digits)
    while ys and ys[-1] == 0:
        ys.pop()
    return DigitVector(matrix.p, tuple(ys))


def scrambled_digit_agreement(C: GeneratingMatrix, L: GeneratingMatrix,
                              pairs: Sequence[Tuple[int, int]]) -> ScrambleVerdict:
    """
    Shared output-digit prefixes of each index pair under C and under L C.

    Args:
        C: Generating matrix
        L: Square, lower-triangular, nonsingular, with as many rows as C
        pairs: Index pairs (n_1, n_2)
    """
    check_scrambler(L)
    if L.p != C.p or L.cols != C.rows:
        raise InvalidInputError(f"scrambler of size {L.rows} does not fit a {C.rows}-row matrix over F_{C.p}")
    LC = L.matmul(C)
    verdict = ScrambleVerdict()
    for n1, n2 in pairs:
        before = _output_digits(C, n1).shared_prefix(_output_digits(C, n2))
        after = _output_digits(LC, n1).shared_prefix(_output_digits(LC, n2))
        verdict.pairs.append(PairAgreement(n1, n2, before, after))
    if not verdict.preserved:
        logger.warning("[Scramble] prefix lost for %s",
                       [(pa.n1, pa.n2) for pa in verdict.pairs if not pa.preserved])
    return verdict


def random_lower_triangular(p: int, size: int, rng: np.random.Generator,
                            unit_diagonal: bool = True) -> GeneratingMatrix:
    """Uniform strictly-lower part over F_p; diagonal ones, or uniform nonzero entries."""
    PrimeModulus(p)
    if size < 1:
        raise InvalidInputError(f"size must be >= 1, got {size}")
    entries = np.tril(rng.integers(0, p, size=(size, size)), -1)
    if unit_diagonal:
        np.fill_diagonal(entries, 1)
    else:
        np.fill_diagonal(entries, rng.integers(1, p, size=size))
    return GeneratingMatrix(p, entries)


@dataclass
class ScrambledPairBound:
    p: int
    w: int
    n1: int
    n2: int
    N: int
    shared: List[int]          # per coordinate, under the scrambled matrices
    dist_sq: Fraction
    limit: Fraction            # (p^2 + p - 1) p^(-2 p^w)

    @property
    def holds(self) -> bool:
        return self.dist_sq <= self.limit

    def to_dict(self) -> Dict:
        return {"p": self.p, "w": self.w, "n1": self.n1, "n2": self.n2, "N": self.N,
                "shared": self.shared, "dist_sq": str(self.dist_sq),
                "limit": str(self.limit), "holds": self.holds}


def scrambled_faure_pair_bound(p: int, w: int,
                               Ls: Optional[Sequence[GeneratingMatrix]] = None,
                               rng: Optional[np.random.Generator] = None) -> ScrambledPairBound:
    """
    Distance of the Faure close pair under (I, L_2 P, ..., L_p P^(p-1)).

    Args:
        p: Prime
        w: Order of the pair, >= 1
        Ls: p - 1 scramblers of size m = (p-1) p^w; drawn from ``rng`` when omitted
        rng: Generator for the random scramblers

    Returns:
        Exact squared distance against (p^2 + p - 1) p^(-2 p^w)
    """
    setup = case_setup(3, p, w)
    size = setup.m
    cap = get_config().matrix_depth
    if size > cap:
        raise ResourceCapError(f"scrambled matrices of size {size} exceed matrix depth {cap}")
    if Ls is None:
        rng = rng or np.random.default_rng()
        Ls = [random_lower_triangular(p, size, rng) for _ in range(p - 1)]
    if len(Ls) != p - 1:
        raise InvalidInputError(f"need {p - 1} scramblers, got {len(Ls)}")
    matrices = [identity_matrix(p, size)]
    for c, L in enumerate(Ls, start=1):
        check_scrambler(L)
        matrices.append(L.matmul(pascal_matrix_power(p, c, size, size)))
    n1, n2 = poly_to_int(setup.n1), poly_to_int(setup.n2)
    shared: List[int] = []
    dist_sq = Fraction(0)
    for C in matrices:
        u, v = _output_digits(C, n1), _output_digits(C, n2)
        shared.append(u.shared_prefix(v))
        gap = RadicalInverse(p, u, 0.0).exact - RadicalInverse(p, v, 0.0).exact
        dist_sq += gap * gap
    limit = Fraction(p * p + p - 1, p ** (2 * p ** w))
    result = ScrambledPairBound(p, w, n1, n2, setup.N, shared, dist_sq, limit)
    logger.debug("[Scramble] p=%d w=%d shared=%s holds=%s", p, w, shared, result.holds)
    return result
