"""
Separation radius q(P_N) = 1/2 min_{i<j<N} ||x_i - x_j||, exactly and for every prefix.

The incremental scan keeps a sparse uniform grid whose cell side is at
least the current minimum distance, so a new point only needs the 3^d
cells around it. The grid is rebuilt with a smaller side whenever the
running minimum drops below half the side. Distances are accumulated
coordinate by coordinate in the same order as the brute-force oracle, so
both give bit-identical doubles.
"""
from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass, asdict
from enum import Enum
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from sequences.halton import UnitPoint
from utils.errors import InvalidInputError

logger = logging.getLogger(__name__)

MIN_CELL_SIDE = 1e-300

PointsLike = Union[np.ndarray, Sequence[UnitPoint], Sequence[Sequence[float]]]


class NormKind(str, Enum):
    """Norm used for all distances of one scan."""
    EUCLIDEAN = "l2"
    MAX = "linf"

    @classmethod
    def parse(cls, text: str) -> "NormKind":
        aliases = {"l2": cls.EUCLIDEAN, "euclidean": cls.EUCLIDEAN,
                   "linf": cls.MAX, "max": cls.MAX}
        try:
            return aliases[text.lower()]
        except KeyError:
            raise InvalidInputError(f"unknown norm {text!r} (use l2 or linf)") from None


@dataclass
class RadiiRecord:
    """Measurement of one prefix P_N."""
    N: int
    q: float
    q_scaled: float
    h_est: Optional[float] = None
    h_bound: Optional[float] = None

    def to_dict(self) -> Dict:
        return asdict(self)


def as_array(points: PointsLike) -> np.ndarray:
    """(N, d) float64 array from an array, UnitPoints or coordinate tuples."""
    if isinstance(points, np.ndarray):
        arr = points
    else:
        rows = [p.coords if isinstance(p, UnitPoint) else tuple(p) for p in points]
        if not rows:
            return np.zeros((0, 0), dtype=np.float64)
        if len({len(r) for r in rows}) != 1:
            raise InvalidInputError("points have inconsistent dimensions")
        arr = np.array(rows, dtype=np.float64)
    if arr.ndim == 1:
        arr = arr.reshape(-1, 1)
    return arr


def _sq_dists(rest: np.ndarray, x: np.ndarray, norm: NormKind) -> np.ndarray:
    diff = rest - x
    if norm is NormKind.MAX:
        return np.abs(diff).max(axis=1)
    acc = diff[:, 0] * diff[:, 0]
    for c in range(1, diff.shape[1]):
        acc = acc + diff[:, c] * diff[:, c]
    return acc


def _to_radius(best: float, norm: NormKind) -> float:
    return 0.5 * (math.sqrt(best) if norm is NormKind.EUCLIDEAN else best)


def min_pair_value(points: PointsLike, norm: NormKind = NormKind.EUCLIDEAN) -> float:
    """Minimum squared distance (l2) or minimum distance (linf) over all pairs."""
    arr = as_array(points)
    if arr.shape[0] < 2:
        raise InvalidInputError("need at least 2 points")
    best = math.inf
    for i in range(arr.shape[0] - 1):
        m = float(_sq_dists(arr[i + 1:], arr[i], norm).min())
        if m < best:
            best = m
            if best == 0.0:
                break
    return best


def separation_exact(points: PointsLike, norm: NormKind = NormKind.EUCLIDEAN) -> float:
    """q(P_N) by brute force over all pairs; 0 when the set has a duplicate."""
    return _to_radius(min_pair_value(points, norm), norm)


class _Grid:
    """Sparse uniform grid keyed by a single integer per cell."""

    def __init__(self, side: float, d: int):
        self.side = side
        self.per_axis = int(1.0 / side) + 3
        self.strides = [self.per_axis ** i for i in range(d)]
        self.offsets = [sum(o * s for o, s in zip(combo, self.strides))
                        for combo in itertools.product((-1, 0, 1), repeat=d)]
        self.cells: Dict[int, List[int]] = {}

    def key(self, x: Sequence[float]) -> int:
        side = self.side
        return sum((int(c / side) + 1) * s for c, s in zip(x, self.strides))

    def insert(self, idx: int, x: Sequence[float]) -> None:
        self.cells.setdefault(self.key(x), []).append(idx)

    def neighbours(self, x: Sequence[float]):
        base = self.key(x)
        cells = self.cells
        for off in self.offsets:
            bucket = cells.get(base + off)
            if bucket:
                yield from bucket


def _pair_value(a: Sequence[float], b: Sequence[float], euclid: bool) -> float:
    if euclid:
        acc = 0.0
        for u, v in zip(a, b):
            t = u - v
            acc += t * t
        return acc
    return max(abs(u - v) for u, v in zip(a, b))


def separation_scan(
    stream: Union[PointsLike, Iterable[UnitPoint]],
    N_max: int,
    norm: NormKind = NormKind.EUCLIDEAN,
) -> List[RadiiRecord]:
    """
    q(P_N) for every N in 2..N_max, computed incrementally.

    Args:
        stream: Points in index order (array, UnitPoints or coordinate tuples); only
            the first N_max are read
        N_max: Largest prefix, >= 2
        norm: Distance norm

    Returns:
        One RadiiRecord per N, q nonincreasing
    """
    if N_max < 2:
        raise InvalidInputError(f"N_max must be >= 2, got {N_max}")
    if isinstance(stream, np.ndarray):
        source = stream[:N_max].tolist()
    else:
        source = (p.coords if isinstance(p, UnitPoint) else tuple(p)
                  for p in itertools.islice(stream, N_max))
    euclid = norm is NormKind.EUCLIDEAN
    pts: List[Tuple[float, ...]] = []
    records: List[RadiiRecord] = []
    best = math.inf
    grid: Optional[_Grid] = None
    d = None
    rebuilds = 0
    for idx, x in enumerate(source):
        x = tuple(float(c) for c in x)
        if d is None:
            d = len(x)
        elif len(x) != d:
            raise InvalidInputError(f"point {idx} has dimension {len(x)}, expected {d}")
        pts.append(x)
        if idx == 0:
            continue
        if best > 0.0:
            if grid is None:
                best = _pair_value(x, pts[0], euclid)
            else:
                for j in grid.neighbours(x):
                    v = _pair_value(x, pts[j], euclid)
                    if v < best:
                        best = v
            delta = math.sqrt(best) if euclid else best
            if delta > 0.0 and (grid is None or delta < grid.side / 2):
                grid = _Grid(max(delta, MIN_CELL_SIDE), d)
                for j, y in enumerate(pts):
                    grid.insert(j, y)
                rebuilds += 1
            elif grid is not None and delta > 0.0:
                grid.insert(idx, x)
        N = idx + 1
        q = _to_radius(best, norm)
        records.append(RadiiRecord(N=N, q=q, q_scaled=q * N ** (1.0 / d)))
    if len(pts) < N_max:
        raise InvalidInputError(f"stream ended after {len(pts)} points, expected {N_max}")
    logger.debug("[Scan] %d prefixes, %d grid rebuilds", len(records), rebuilds)
    return records


@dataclass
class OriginRecord:
    """Distance from x_0 to the rest of P_N."""
    N: int
    m: float             # min_{1<=i<N} ||x_0 - x_i||
    scaled: float        # m * N^(1/d)
    c_estimate: float    # running minimum of ``scaled``
    geo_bound: float     # sqrt(d) * min_i prod_l |x_{i,l} - x_{0,l}|^(1/d), a lower bound of m

    def to_dict(self) -> Dict:
        return asdict(self)


def origin_separation(stream: Union[PointsLike, Iterable[UnitPoint]], N_max: int) -> List[OriginRecord]:
    """m(N) = min_{1<=i<N} ||x_0 - x_i|| for N = 2..N_max, with an empirical c_d."""
    if N_max < 2:
        raise InvalidInputError(f"N_max must be >= 2, got {N_max}")
    if isinstance(stream, np.ndarray):
        arr = stream[:N_max]
    else:
        arr = as_array(list(itertools.islice(iter(stream), N_max)))
    if arr.shape[0] < N_max:
        raise InvalidInputError(f"stream ended after {arr.shape[0]} points, expected {N_max}")
    d = arr.shape[1]
    diff = np.abs(arr[1:] - arr[0])
    dist = np.sqrt(np.sum(diff * diff, axis=1))
    geo = math.sqrt(d) * np.prod(diff, axis=1) ** (1.0 / d)
    m_run = np.minimum.accumulate(dist)
    g_run = np.minimum.accumulate(geo)
    records: List[OriginRecord] = []
    c_est = math.inf
    for i in range(N_max - 1):
        N = i + 2
        m = float(m_run[i])
        scaled = m * N ** (1.0 / d)
        c_est = min(c_est, scaled)
        records.append(OriginRecord(N=N, m=m, scaled=scaled, c_estimate=c_est, geo_bound=float(g_run[i])))
    return records


def volumetric_q_bound(N: int, d: int) -> float:
    """sqrt(d) N^(-1/d): an admissible C_q N^(-1/d) for every N-point set in the unit cube."""
    return math.sqrt(d) * N ** (-1.0 / d)
