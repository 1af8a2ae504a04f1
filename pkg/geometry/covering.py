"""
Covering radius h(P_N) = sup_x min_i ||x - x_i||: a lattice lower estimate
and the theoretical upper bounds for Halton and Halton-type sequences.
"""
from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass, asdict
from typing import Dict, Sequence, Union

import numpy as np

from geometry.radii import NormKind, PointsLike, as_array
from sequences.halton import IntegerBaseSet
from sequences.polynomial import PolyBaseSet
from utils.config import get_config
from utils.errors import InvalidInputError, ResourceCapError

logger = logging.getLogger(__name__)

# nearest-point distances evaluated per numpy block
BLOCK_ELEMENTS = 1 << 22


@dataclass
class CoveringEstimate:
    """max over the G^d sample lattice of the distance to the nearest point."""
    h_est: float
    grid: int
    samples: int
    discretization_error: float  # h <= h_est + discretization_error

    def to_dict(self) -> Dict:
        return asdict(self)


def covering_estimate(points: PointsLike, grid: int, norm: NormKind = NormKind.EUCLIDEAN) -> CoveringEstimate:
    """
    Lower estimate of h(P_N) on the regular lattice {0, 1/(G-1), ..., 1}^d.

    Sample points are processed in fixed-size blocks in lattice order; the max/min
    reductions do not depend on the block size.
    """
    if grid < 2:
        raise InvalidInputError(f"grid resolution must be >= 2, got {grid}")
    arr = as_array(points)
    if arr.shape[0] < 1:
        raise InvalidInputError("need at least one point")
    d = arr.shape[1]
    n_samples = grid ** d
    cap = get_config().cover_sample_cap
    if n_samples > cap:
        raise ResourceCapError(f"{grid}^{d} sample points exceed cap {cap}")
    axis = np.linspace(0.0, 1.0, grid)
    block = max(1, BLOCK_ELEMENTS // max(1, arr.shape[0] * d))
    sample_iter = itertools.product(range(grid), repeat=d)
    worst = 0.0
    done = 0
    while done < n_samples:
        size = min(block, n_samples - done)
        idx = np.array(list(itertools.islice(sample_iter, size)), dtype=np.int64)
        samples = axis[idx]
        diff = samples[:, None, :] - arr[None, :, :]
        if norm is NormKind.MAX:
            dist = np.abs(diff).max(axis=2)
        else:
            dist = np.sqrt(np.sum(diff * diff, axis=2))
        worst = max(worst, float(dist.min(axis=1).max()))
        done += size
    if norm is NormKind.MAX:
        err = 1.0 / (2 * (grid - 1))
    else:
        err = math.sqrt(d) / (2 * (grid - 1))
    return CoveringEstimate(h_est=worst, grid=grid, samples=n_samples, discretization_error=err)


def covering_upper_bound(
    bases: Union[IntegerBaseSet, PolyBaseSet],
    N: int,
    family: str = "auto",
) -> float:
    """
    sqrt(d) N^(-1/d) max_l b_l (Halton) or sqrt(d) N^(-1/d) max_l p^(e_l) (Halton-type).

    Args:
        bases: Integer or polynomial bases
        N: Prefix size, >= 1
        family: "halton", "halton_type", or "auto" to follow the type of ``bases``
    """
    if N < 1:
        raise InvalidInputError(f"N must be >= 1, got {N}")
    if family == "auto":
        family = "halton_type" if isinstance(bases, PolyBaseSet) else "halton"
    if family == "halton":
        if not isinstance(bases, IntegerBaseSet):
            raise InvalidInputError("halton bound needs integer bases")
        return halton_covering_bound(bases.bases, N)
    if family == "halton_type":
        if not isinstance(bases, PolyBaseSet):
            raise InvalidInputError("halton_type bound needs polynomial bases")
        return halton_type_covering_bound(bases.p, bases.degrees, N)
    raise InvalidInputError(f"unknown family {family!r}")


def halton_covering_bound(bases: Sequence[int], N: int) -> float:
    d = len(bases)
    return math.sqrt(d) * N ** (-1.0 / d) * max(bases)


def halton_type_covering_bound(p: int, degrees: Sequence[int], N: int) -> float:
    d = len(degrees)
    return math.sqrt(d) * N ** (-1.0 / d) * max(p ** e for e in degrees)
