"""
Digital sequences over F_p: generating matrices, Pascal powers, and the
(t,d)-sequence rank condition.

Matrices are finite truncations of the infinite C_l: ``cols`` input digits
and ``rows`` output digits.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from math import comb
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from algebra.digits import DigitVector, digits_base
from algebra.primes import PrimeModulus
from sequences.halton import UnitPoint, digits_to_unit
from utils.config import get_config
from utils.errors import InvalidInputError, ResourceCapError, TruncationError

logger = logging.getLogger(__name__)

T_PROPERTY_MAX_M = 12


@dataclass(frozen=True)
class GeneratingMatrix:
    """R x C matrix over F_p stored as an int64 array with entries in [0, p)."""
    p: int
    entries: np.ndarray

    def __post_init__(self):
        PrimeModulus(self.p)
        arr = np.asarray(self.entries, dtype=np.int64)
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise InvalidInputError(f"generating matrix must be a nonempty 2-D array, got {arr.shape}")
        arr = np.mod(arr, self.p)
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]

    def __eq__(self, other) -> bool:
        return (isinstance(other, GeneratingMatrix) and self.p == other.p
                and np.array_equal(self.entries, other.entries))

    def __hash__(self) -> int:
        return hash((self.p, self.entries.tobytes(), self.entries.shape))

    def apply(self, digits: Sequence[int]) -> List[int]:
        """Output digits y = C . n over F_p for the input digit vector n."""
        if len(digits) > self.cols:
            raise TruncationError(f"index has {len(digits)} digits, matrix has {self.cols} columns")
        vec = np.zeros(self.cols, dtype=np.int64)
        vec[:len(digits)] = digits
        return [int(v) for v in np.mod(self.entries @ vec, self.p)]

    def matmul(self, other: "GeneratingMatrix") -> "GeneratingMatrix":
        if other.p != self.p or self.cols != other.rows:
            raise InvalidInputError("incompatible generating matrices")
        return GeneratingMatrix(self.p, np.mod(self.entries @ other.entries, self.p))

    def is_lower_triangular(self) -> bool:
        return self.rows == self.cols and not np.triu(self.entries, 1).any()

    def to_rows(self) -> List[List[int]]:
        return self.entries.tolist()


def identity_matrix(p: int, size: int) -> GeneratingMatrix:
    return GeneratingMatrix(p, np.eye(size, dtype=np.int64))


def pascal_matrix_power(p: int, power: int, rows: int, cols: int) -> GeneratingMatrix:
    """P^c mod p with entry (i, j) = binom(j, i) c^(j-i) for j >= i."""
    if power < 0:
        raise InvalidInputError(f"power must be >= 0, got {power}")
    entries = np.zeros((rows, cols), dtype=np.int64)
    for i in range(rows):
        for j in range(i, cols):
            entries[i, j] = (comb(j, i) % p) * pow(power, j - i, p) % p
    return GeneratingMatrix(p, entries)


def faure_matrices(p: int, rows: Optional[int] = None, cols: Optional[int] = None) -> List[GeneratingMatrix]:
    """(I, P, ..., P^(p-1)) mod p, the generating matrices of the Faure sequence in base p."""
    PrimeModulus(p)
    rows = rows or get_config().matrix_depth
    cols = cols or rows
    return [pascal_matrix_power(p, c, rows, cols) for c in range(p)]


def sobol_2d(rows: Optional[int] = None, cols: Optional[int] = None) -> List[GeneratingMatrix]:
    """(I, P) mod 2: the two-dimensional Sobol' sequence is the Faure sequence in base 2."""
    return faure_matrices(2, rows, cols)


def matrix_width_for(p: int, n_max: int) -> int:
    """ceil(log_p(n_max)) + 1 columns, enough for every index below n_max."""
    width = 1
    while p ** width < n_max:
        width += 1
    return width + 1


def digital_coordinate(n: int, matrix: GeneratingMatrix) -> Tuple[float, DigitVector]:
    ys = matrix.apply(digits_base(n, matrix.p).digits)
    while ys and ys[-1] == 0:
        ys.pop()
    return digits_to_unit(ys, matrix.p), DigitVector(matrix.p, tuple(ys))


def digital_point(n: int, matrices: Sequence[GeneratingMatrix]) -> UnitPoint:
    """x_{n,l} = sum_j y_j p^-j with y = C_l . n over F_p."""
    if not matrices:
        raise InvalidInputError("at least one generating matrix is required")
    p = matrices[0].p
    if any(m.p != p for m in matrices):
        raise InvalidInputError("generating matrices must share the same prime")
    parts = [digital_coordinate(n, m) for m in matrices]
    return UnitPoint(tuple(v for v, _ in parts), tuple(dv for _, dv in parts))


def digital_prefix(matrices: Sequence[GeneratingMatrix], N: int, start: int = 0) -> Iterator[UnitPoint]:
    if N < 1:
        raise InvalidInputError(f"N must be >= 1, got {N}")
    for n in range(start, N):
        yield digital_point(n, matrices)


def rank_mod_p(rows: np.ndarray, p: int) -> int:
    """Rank over F_p by Gaussian elimination."""
    a = np.mod(np.array(rows, dtype=np.int64), p)
    if a.size == 0:
        return 0
    n_rows, n_cols = a.shape
    rank = 0
    for col in range(n_cols):
        pivot = next((r for r in range(rank, n_rows) if a[r, col]), None)
        if pivot is None:
            continue
        if pivot != rank:
            a[[rank, pivot]] = a[[pivot, rank]]
        a[rank] = (a[rank] * pow(int(a[rank, col]), -1, p)) % p
        for r in range(n_rows):
            if r != rank and a[r, col]:
                a[r] = (a[r] - a[r, col] * a[rank]) % p
        rank += 1
        if rank == n_rows:
            break
    return rank


def compositions(total: int, parts: int) -> Iterator[Tuple[int, ...]]:
    """All (w_1, ..., w_parts) of non-negative integers summing to total, w_1 descending first."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in compositions(total - first, parts - 1):
            yield (first,) + rest


@dataclass
class TPropertyVerdict:
    """Per-m outcome of the (t,d) rank check; ``failures[m]`` is the first failing composition or None."""
    t: int
    m_max: int
    failures: Dict[int, Optional[Tuple[int, ...]]]
    checked: int = 0

    @property
    def passed(self) -> bool:
        return all(f is None for f in self.failures.values())

    def to_dict(self) -> Dict:
        return {
            "t": self.t,
            "m_max": self.m_max,
            "passed": self.passed,
            "compositions_checked": self.checked,
            "failures": {str(m): (list(f) if f else None) for m, f in self.failures.items()},
        }


def check_t_property(matrices: Sequence[GeneratingMatrix], t: int, m_max: int) -> TPropertyVerdict:
    """
    Check the (t,d)-sequence rank condition for every m in (t, m_max].

    For each composition w_1 + ... + w_d = m - t, the first w_l rows of the
    first m columns of every C_l, stacked, must have rank m - t.
    """
    if t < 0:
        raise InvalidInputError(f"t must be >= 0, got {t}")
    if m_max > T_PROPERTY_MAX_M:
        raise ResourceCapError(f"m_max {m_max} exceeds {T_PROPERTY_MAX_M}")
    if any(c.cols < m_max or c.rows < m_max - t for c in matrices):
        raise InvalidInputError(f"matrices must be at least {m_max} columns wide")
    p = matrices[0].p
    verdict = TPropertyVerdict(t=t, m_max=m_max, failures={})
    for m in range(t + 1, m_max + 1):
        verdict.failures[m] = None
        for w in compositions(m - t, len(matrices)):
            verdict.checked += 1
            blocks = [c.entries[:wl, :m] for c, wl in zip(matrices, w) if wl]
            stacked = np.vstack(blocks)
            if rank_mod_p(stacked, p) < m - t:
                logger.debug("[TCheck] m=%d fails at composition %s", m, w)
                verdict.failures[m] = w
                break
    return verdict
