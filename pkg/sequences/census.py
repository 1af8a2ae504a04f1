"""
Elementary-interval census for Halton-type sequences.

Among the first N' = prod p^(e_l j_l) points every interval
prod [c_l p^(-e_l j_l), (c_l + 1) p^(-e_l j_l)) should hold exactly one
point. Bins are found from the leading j_l digit values of each coordinate
(integer arithmetic only), so no point lands in the wrong bin through
rounding.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from sequences.polynomial import PolyBaseSet, bx_expand
from utils.config import get_config
from utils.errors import InvalidInputError, ResourceCapError

logger = logging.getLogger(__name__)


@dataclass
class CensusResult:
    """Per-bin point counts, flattened in row-major order over (c_1, ..., c_d)."""
    exponents: Tuple[int, ...]
    shape: Tuple[int, ...]
    counts: np.ndarray
    n_points: int

    @property
    def all_ones(self) -> bool:
        return bool(np.all(self.counts == 1))

    def to_dict(self) -> Dict:
        return {
            "exponents": list(self.exponents),
            "bins": int(self.counts.size),
            "points": self.n_points,
            "all_ones": self.all_ones,
            "min_count": int(self.counts.min()),
            "max_count": int(self.counts.max()),
        }


def _bin_index(n: int, bases: PolyBaseSet, exponents: Sequence[int]) -> Tuple[int, ...]:
    idx = []
    for b, j in zip(bases.bases, exponents):
        q = b.p ** b.degree
        vals = bx_expand(n, b).digit_values
        c = 0
        for i in range(j):
            c = c * q + (vals[i] if i < len(vals) else 0)
        idx.append(c)
    return tuple(idx)


def census_chunk(bases: PolyBaseSet, exponents: Sequence[int], start: int, stop: int) -> np.ndarray:
    """Counts contributed by indices in [start, stop)."""
    shape = tuple(b.p ** (b.degree * j) for b, j in zip(bases.bases, exponents))
    counts = np.zeros(shape, dtype=np.int64)
    for n in range(start, stop):
        counts[_bin_index(n, bases, exponents)] += 1
    return counts


def elementary_interval_census(
    bases: PolyBaseSet,
    exponents: Sequence[int],
    chunk_size: Optional[int] = None,
) -> CensusResult:
    """
    Bin the first N' Halton-type points into the elementary intervals of the given exponents.

    Args:
        bases: Base polynomials
        exponents: j_1, ..., j_d (non-negative)
        chunk_size: Index-range size per partial count; the merged result does not depend on it

    Returns:
        CensusResult with one count per interval
    """
    exponents = tuple(int(j) for j in exponents)
    if len(exponents) != bases.d:
        raise InvalidInputError(f"need {bases.d} exponents, got {len(exponents)}")
    if any(j < 0 for j in exponents):
        raise InvalidInputError("exponents must be non-negative")
    n_prime = 1
    for b, j in zip(bases.bases, exponents):
        n_prime *= b.p ** (b.degree * j)
    cap = get_config().census_cap
    if n_prime > cap:
        raise ResourceCapError(f"census of {n_prime} points exceeds cap {cap}")
    chunk_size = chunk_size or n_prime
    partials: List[np.ndarray] = []
    for start in range(0, n_prime, chunk_size):
        partials.append(census_chunk(bases, exponents, start, min(start + chunk_size, n_prime)))
    counts = partials[0]
    for part in partials[1:]:
        counts = counts + part
    logger.debug("[Census] %d points into %d bins", n_prime, counts.size)
    return CensusResult(exponents=exponents, shape=counts.shape, counts=counts.reshape(-1), n_points=n_prime)
