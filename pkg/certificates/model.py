"""Certificate data model shared by the builders, the verifier and the JSON codec."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple

from certificates.logdomain import ChainCheck
from utils.errors import InvalidInputError


class CertificateVerdict(str, Enum):
    """Overall outcome of a certificate."""
    PASS = "pass"
    UNCONDITIONAL = "unconditional_only"  # indices and per-coordinate bounds checked, chain skipped
    FAIL = "fail"
    UNVERIFIED = "unverified"


class Family(str, Enum):
    HALTON = "halton"
    HALTON_TYPE_CASE1 = "halton_type_case1"
    HALTON_TYPE_CASE2 = "halton_type_case2"
    FAURE = "faure"


@dataclass
class CoordinateBound:
    """|x_{n,j} - x_{m,j}| <= bound for one coordinate, with how it was established."""
    coord: int                 # 1-based
    base: str                  # integer base or polynomial text
    shared_digits: int         # leading output digits on which both points agree (-1: identical)
    required_digits: int       # agreement needed for the bound
    bound_log: float           # natural log of the bound
    bound_exact: Optional[str] = None   # rational text when known
    gap_exact: Optional[str] = None     # exact |difference| when computed
    verified: bool = False

    def to_dict(self) -> Dict[str, Any]:
        return {
            "coord": self.coord,
            "base": self.base,
            "shared_digits": self.shared_digits,
            "required_digits": self.required_digits,
            "bound_log": self.bound_log,
            "bound_exact": self.bound_exact,
            "gap_exact": self.gap_exact,
            "verified": self.verified,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "CoordinateBound":
        return cls(
            coord=int(data["coord"]),
            base=str(data["base"]),
            shared_digits=int(data["shared_digits"]),
            required_digits=int(data["required_digits"]),
            bound_log=float(data["bound_log"]),
            bound_exact=data.get("bound_exact"),
            gap_exact=data.get("gap_exact"),
            verified=bool(data.get("verified", False)),
        )


@dataclass
class PairCertificate:
    """
    A claimed close pair x_n, x_m among the first N points.

    Integer-family certificates also carry r, k, c_j, l and M; the
    polynomial families carry p, w (and the shift a) in ``params``.
    """
    family: Family
    params: Dict[str, Any]
    n: int
    m: int
    N: int
    r: Optional[int] = None
    k: Optional[int] = None
    c: Tuple[int, ...] = ()
    ell: Optional[int] = None
    M: Optional[int] = None
    condition_met: bool = True
    coord_bounds: List[CoordinateBound] = field(default_factory=list)
    chain: List[ChainCheck] = field(default_factory=list)
    verdict: CertificateVerdict = CertificateVerdict.UNVERIFIED
    notes: List[str] = field(default_factory=list)

    @property
    def d(self) -> int:
        return len(self.coord_bounds) if self.coord_bounds else int(self.params.get("d", 0))

    @property
    def success(self) -> bool:
        return self.verdict in (CertificateVerdict.PASS, CertificateVerdict.UNCONDITIONAL)

    def failed_checks(self) -> List[str]:
        out = [f"coordinate {b.coord}" for b in self.coord_bounds if not b.verified]
        out.extend(ch.name for ch in self.chain if not ch.passed)
        return out

    def half_distance(self) -> float:
        """1/2 ||x_n - x_m|| from the exact per-coordinate gaps, an upper bound of q(P_N)."""
        if not self.coord_bounds or any(cb.gap_exact is None for cb in self.coord_bounds):
            raise InvalidInputError("certificate carries no exact gaps")
        dist_sq = sum((Fraction(cb.gap_exact) ** 2 for cb in self.coord_bounds), Fraction(0))
        return 0.5 * math.sqrt(dist_sq)
