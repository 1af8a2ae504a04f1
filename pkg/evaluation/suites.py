"""
Property suites behind ``run_qmc.py verify``.

Each suite runs a group of exhaustive or seed-fixed checks and reports a
SuiteResult; ``run_suites`` runs several in order, optionally writing a
progress file after each so long runs can be monitored.

Usage:
    python -m evaluation.suites --suite lemmas
"""
from __future__ import annotations

import argparse
import logging
import sys
import time
from dataclasses import dataclass, field
from datetime import datetime
from enum import Enum
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional

import numpy as np

sys.path.insert(0, str(Path(__file__).parent.parent))

from algebra.ffpoly import PolyOverFp, parse_poly_list
from certificates.halton_pair import halton_close_pair, verify_certificate_chain
from certificates.halton_type_pair import halton_type_close_pair
from certificates.lemmas import close_pair_bounds_sweep, lifting_lemma_sweep, root_product_identity
from certificates.model import PairCertificate
from certificates.scrambling import random_lower_triangular, scrambled_digit_agreement, scrambled_faure_pair_bound
from certificates.serialize import save_json
from geometry.radii import separation_scan
from sequences.census import elementary_interval_census
from sequences.digital import check_t_property, digital_point, faure_matrices, matrix_width_for, pascal_matrix_power
from sequences.halton import IntegerBaseSet, halton_array
from sequences.polynomial import PolyBaseSet, faure_bases, halton_type_point, halton_type_prefix
from utils.errors import QMCError

logger = logging.getLogger(__name__)

# q(P_N) is confirmed by a full scan for certificates up to this N
SCAN_CONFIRM_MAX_N = 100_000
SCRAMBLE_TRIALS = 100


class SuiteStatus(str, Enum):
    PASS = "pass"
    FAIL = "fail"
    ERROR = "error"


@dataclass
class SuiteResult:
    name: str
    status: SuiteStatus
    checks: Dict[str, Any] = field(default_factory=dict)
    message: str = ""
    elapsed_seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return self.status is SuiteStatus.PASS

    def to_dict(self) -> Dict[str, Any]:
        return {"suite": self.name, "status": self.status.value, "checks": self.checks,
                "message": self.message, "elapsed_seconds": round(self.elapsed_seconds, 3)}


def _result(name: str, checks: Dict[str, Any], ok: bool) -> SuiteResult:
    return SuiteResult(name, SuiteStatus.PASS if ok else SuiteStatus.FAIL, checks)


def suite_lemmas(seed: int = 0) -> SuiteResult:
    lifting = lifting_lemma_sweep()
    sweeps = [close_pair_bounds_sweep(IntegerBaseSet((2, 3))),
              close_pair_bounds_sweep(IntegerBaseSet((2, 3, 5)))]
    roots = {f"p={p},w={w}": root_product_identity(p, w) for p in (2, 3, 5, 7) for w in range(3)}
    checks = {"lifting": lifting.to_dict(),
              "close_bounds": [s.to_dict() for s in sweeps],
              "root_product": roots}
    return _result("lemmas", checks, lifting.passed and all(s.passed for s in sweeps) and all(roots.values()))


def suite_intervals(seed: int = 0) -> SuiteResult:
    triple = PolyBaseSet(2, (PolyOverFp.x(2), PolyOverFp.linear(1, 2), PolyOverFp.make([1, 1, 1], 2)))
    runs = {
        "X,X+1,X^2+X+1 j=(2,2,1)": elementary_interval_census(triple, (2, 2, 1)),
        "X,X+1 j=(3,2)": elementary_interval_census(PolyBaseSet(2, triple.bases[:2]), (3, 2)),
        "faure p=3 j=(2,1,1)": elementary_interval_census(faure_bases(3), (2, 1, 1)),
    }
    checks = {name: r.to_dict() for name, r in runs.items()}
    return _result("intervals", checks, all(r.all_ones for r in runs.values()))


def suite_t_property(seed: int = 0, m_max: int = 6) -> SuiteResult:
    checks = {}
    ok = True
    for p in (2, 3):
        verdict = check_t_property(faure_matrices(p, rows=m_max, cols=m_max), t=0, m_max=m_max)
        checks[f"faure p={p}"] = verdict.to_dict()
        ok = ok and verdict.passed
    return _result("t-property", checks, ok)


def faure_equivalence(p: int, digits: int = 6) -> int:
    """Indices n < p^digits whose Pascal-digital and Halton-type points differ in any digit."""
    n_max = p ** digits
    width = matrix_width_for(p, n_max)
    matrices = faure_matrices(p, rows=width, cols=width)
    bases = faure_bases(p)
    mismatches = 0
    for n in range(n_max):
        if digital_point(n, matrices).exact_digits != halton_type_point(n, bases).exact_digits:
            mismatches += 1
    return mismatches


def suite_faure(seed: int = 0) -> SuiteResult:
    checks = {f"p={p}": {"mismatches": faure_equivalence(p)} for p in (2, 3, 5)}
    return _result("faure", checks, all(c["mismatches"] == 0 for c in checks.values()))


def suite_scrambling(seed: int = 0, trials: int = SCRAMBLE_TRIALS) -> SuiteResult:
    rng = np.random.default_rng(seed)
    cert = halton_type_close_pair(3, p=3, w=1)
    size = matrix_width_for(3, cert.N)
    pascal = [pascal_matrix_power(3, c, size, size) for c in range(3)]
    lost = 0
    bound_fail = 0
    for _ in range(trials):
        for C in pascal:
            L = random_lower_triangular(3, size, rng)
            if not scrambled_digit_agreement(C, L, [(cert.n, cert.m)]).preserved:
                lost += 1
        if not scrambled_faure_pair_bound(3, 1, rng=rng).holds:
            bound_fail += 1
    checks = {"seed": seed, "trials": trials, "prefix_lost": lost, "bound_failures": bound_fail}
    return _result("scrambling", checks, lost == 0 and bound_fail == 0)


def _confirm_by_scan(cert: PairCertificate, points) -> Dict[str, Any]:
    """Measured q(P_N) against the certified 1/2 ||x_n - x_m||."""
    q = separation_scan(points, cert.N)[-1].q
    bound = cert.half_distance()
    return {"N": cert.N, "q_measured": q, "half_distance": bound, "holds": q <= bound}


def default_certificates() -> List[Callable[[], PairCertificate]]:
    def halton(bases, k):
        def build():
            cert = halton_close_pair(IntegerBaseSet(bases), k)
            verify_certificate_chain(cert)
            return cert
        return build
    return [
        halton((2, 3), 2),
        halton((2, 3), 7),
        halton((2, 3, 5), 10),
        lambda: halton_type_close_pair(1, p=2, w=2, a=0),
        lambda: halton_type_close_pair(2, w=1),
        lambda: halton_type_close_pair(3, p=3, w=1),
    ]


def suite_certificates(seed: int = 0) -> SuiteResult:
    checks: List[Dict[str, Any]] = []
    ok = True
    for build in default_certificates():
        cert = build()
        entry: Dict[str, Any] = {"family": cert.family.value, "params": cert.params, "k": cert.k,
                                 "verdict": cert.verdict.value, "failed": cert.failed_checks()}
        ok = ok and cert.success
        if cert.N <= SCAN_CONFIRM_MAX_N:
            if "bases" in cert.params:
                points = halton_array(IntegerBaseSet(tuple(cert.params["bases"])), cert.N)
            else:
                points = halton_type_prefix(_poly_bases(cert), cert.N)
            entry["scan"] = _confirm_by_scan(cert, points)
            ok = ok and entry["scan"]["holds"]
        checks.append(entry)
    return _result("certificates", {"certificates": checks}, ok)


def _poly_bases(cert: PairCertificate) -> PolyBaseSet:
    return PolyBaseSet(cert.params["p"], tuple(parse_poly_list(cert.params["polys"], cert.params["p"])))


SUITES: Dict[str, Callable[..., SuiteResult]] = {
    "lemmas": suite_lemmas,
    "intervals": suite_intervals,
    "t-property": suite_t_property,
    "faure": suite_faure,
    "scrambling": suite_scrambling,
    "certificates": suite_certificates,
}


def run_suite(name: str, seed: int = 0) -> SuiteResult:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES)} or all")
    start = time.perf_counter()
    try:
        result = SUITES[name](seed=seed)
    except QMCError as e:
        logger.error("[Verify] suite %s raised %s", name, e)
        result = SuiteResult(name, SuiteStatus.ERROR, message=str(e))
    result.elapsed_seconds = time.perf_counter() - start
    logger.info("[Verify] %s: %s (%.2fs)", name, result.status.value, result.elapsed_seconds)
    return result


def write_progress(filepath: str, status: str, results: List[SuiteResult], total: int,
                   start_time: datetime) -> None:
    """Write suite progress for monitoring long runs."""
    save_json(filepath, {
        "status": status,
        "completed": len(results),
        "total": total,
        "elapsed_seconds": round((datetime.now() - start_time).total_seconds(), 1),
        "timestamp": datetime.now().isoformat(),
        "results": [r.to_dict() for r in results],
    })


def run_suites(names: List[str], seed: int = 0, progress_path: Optional[str] = None,
               on_result: Optional[Callable[[SuiteResult], None]] = None) -> Dict[str, Any]:
    """
    Run suites in order and summarize.

    Args:
        names: Suite names; "all" expands to every suite
        seed: Seed for the randomized suites
        progress_path: Optional JSON file rewritten after each suite
        on_result: Callback per finished suite (CLI progress lines)

    Returns:
        {"metadata", "statistics", "results", "success"}
    """
    if "all" in names:
        names = list(SUITES)
    start_time = datetime.now()
    results: List[SuiteResult] = []
    for name in names:
        if progress_path:
            write_progress(progress_path, "in_progress", results, len(names), start_time)
        result = run_suite(name, seed=seed)
        results.append(result)
        if on_result:
            on_result(result)
    if progress_path:
        write_progress(progress_path, "completed", results, len(names), start_time)
    return {
        "metadata": {"suites": names, "seed": seed, "timestamp": datetime.now().isoformat()},
        "statistics": {
            "total": len(results),
            "pass": sum(1 for r in results if r.status is SuiteStatus.PASS),
            "fail": sum(1 for r in results if r.status is SuiteStatus.FAIL),
            "error": sum(1 for r in results if r.status is SuiteStatus.ERROR),
        },
        "results": [r.to_dict() for r in results],
        "success": all(r.passed for r in results),
    }


def main():
    parser = argparse.ArgumentParser(description="Run property suites")
    parser.add_argument("--suite", action="append", default=None,
                        help=f"Suite to run ({', '.join(SUITES)}, all); repeatable")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("-p", "--progress", default=None, help="Progress JSON file")
    args = parser.parse_args()
    logging.basicConfig(level=logging.INFO, format="%(message)s")
    summary = run_suites(args.suite or ["all"], seed=args.seed, progress_path=args.progress)
    for r in summary["results"]:
        print(f"  {r['suite']:<14} {r['status']}")
    sys.exit(0 if summary["success"] else 1)


if __name__ == "__main__":
    main()
