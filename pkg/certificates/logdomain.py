"""
Comparisons of astronomically large quantities through their natural logs.

An inequality lhs <= rhs is decided twice, once with the tolerance added
and once with it subtracted. Only when both agree is it reported as
PASS or FAIL; a disagreement is INDETERMINATE and fails the run.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Dict, Iterable, Optional

from gmpy2 import mpz

from utils.config import get_config
from utils.errors import InvalidInputError

LN2 = math.log(2.0)


class CheckStatus(str, Enum):
    """Outcome of one inequality check."""
    PASS = "pass"
    FAIL = "fail"
    INDETERMINATE = "indeterminate"


def log_int(n) -> float:
    """Natural log of a positive integer of any size (top 64 bits plus a shift)."""
    x = mpz(n)
    if x <= 0:
        raise InvalidInputError("log of a non-positive integer")
    shift = max(0, x.bit_length() - 64)
    return math.log(int(x >> shift)) + shift * LN2


def log_sum_exp(values: Iterable[float]) -> float:
    vals = list(values)
    if not vals:
        return -math.inf
    top = max(vals)
    if top == -math.inf:
        return top
    return top + math.log(sum(math.exp(v - top) for v in vals))


@dataclass(frozen=True)
class LogValue:
    """log of a positive quantity together with the relative slack of comparisons."""
    log: float
    slack: float = 1e-9

    @classmethod
    def of_int(cls, n, slack: Optional[float] = None) -> "LogValue":
        return cls(log_int(n), get_config().log_slack if slack is None else slack)

    def __mul__(self, other: "LogValue") -> "LogValue":
        return LogValue(self.log + other.log, max(self.slack, other.slack))

    def __truediv__(self, other: "LogValue") -> "LogValue":
        return LogValue(self.log - other.log, max(self.slack, other.slack))

    def __pow__(self, e: float) -> "LogValue":
        return LogValue(self.log * e, self.slack)

    def le(self, other: "LogValue") -> CheckStatus:
        return compare_logs(self.log, other.log, max(self.slack, other.slack))


def compare_logs(lhs: float, rhs: float, slack: Optional[float] = None) -> CheckStatus:
    """Decide exp(lhs) <= exp(rhs) with relative tolerance ``slack`` on the logs."""
    if slack is None:
        slack = get_config().log_slack
    tol = slack * max(1.0, abs(lhs), abs(rhs))
    loose = lhs <= rhs + tol
    tight = lhs <= rhs - tol
    if loose and tight:
        return CheckStatus.PASS
    if not loose and not tight:
        return CheckStatus.FAIL
    return CheckStatus.INDETERMINATE


@dataclass
class ChainCheck:
    """One inequality lhs <= rhs of a certificate, with both sides as logs."""
    name: str
    lhs_log: float
    rhs_log: float
    status: CheckStatus
    exact: bool = False  # decided with exact integer/rational arithmetic

    @property
    def passed(self) -> bool:
        return self.status is CheckStatus.PASS

    def to_dict(self) -> Dict:
        return {
            "name": self.name,
            "lhs_log": self.lhs_log,
            "rhs_log": self.rhs_log,
            "status": self.status.value,
            "exact": self.exact,
        }

    @classmethod
    def from_dict(cls, data: Dict) -> "ChainCheck":
        return cls(data["name"], float(data["lhs_log"]), float(data["rhs_log"]),
                   CheckStatus(data["status"]), bool(data.get("exact", False)))


def log_check(name: str, lhs_log: float, rhs_log: float, slack: Optional[float] = None) -> ChainCheck:
    slack = get_config().log_slack if slack is None else slack
    status = LogValue(lhs_log, slack).le(LogValue(rhs_log, slack))
    return ChainCheck(name, lhs_log, rhs_log, status)


def exact_check(name: str, holds: bool, lhs_log: float, rhs_log: float) -> ChainCheck:
    """Record an inequality that was decided exactly; the logs are informational."""
    return ChainCheck(name, lhs_log, rhs_log,
                      CheckStatus.PASS if holds else CheckStatus.FAIL, exact=True)
