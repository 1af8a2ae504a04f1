#!/usr/bin/env python3
"""
Command-line orchestrator for low-discrepancy sequences, separation radii
and close-pair certificates.

Commands:
  generate  List the first points of a sequence as CSV
  scan      q(P_N) for every N <= N_max (CSV per dimension, optional SVG)
  certify   Build and verify a close-pair certificate (JSON)
  verify    Run property suites
  cover     Covering-radius estimate, bound and mesh ratio at one N

Usage:
    python run_qmc.py scan --family halton --dims 2-5 --max-n 100000 --csv out/radii.csv --svg out/radii.svg

Example:
    python run_qmc.py certify halton --bases 2,3 --k 2 --json out/halton_2_3_k2.json
    python run_qmc.py certify faure --p 3 --w 1
    python run_qmc.py verify --suite lemmas --suite intervals
"""
from __future__ import annotations

import argparse
import io
import logging
import os
import sys
import time
from dataclasses import dataclass, field
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, Iterator, List, Optional, Tuple

import numpy as np

# Fix Windows console encoding when attached to a terminal
if sys.platform == 'win32' and sys.stdout.isatty():
    try:
        sys.stdout = io.TextIOWrapper(sys.stdout.buffer, encoding='utf-8', errors='replace')
        sys.stderr = io.TextIOWrapper(sys.stderr.buffer, encoding='utf-8', errors='replace')
    except Exception:
        pass

sys.path.insert(0, str(Path(__file__).parent))

from dotenv import load_dotenv

from certificates.certificate_store import certificate_key, get_certificate_store
from certificates.halton_pair import halton_close_pair, verify_certificate_chain
from certificates.halton_type_pair import halton_type_close_pair
from certificates.model import PairCertificate
from certificates.serialize import load_certificate, read_certificate, save_json, serialize_certificate
from certificates.verify import verify_certificate
from evaluation.suites import SUITES, SuiteResult, run_suites
from geometry.covering import covering_estimate, covering_upper_bound
from geometry.radii import NormKind, RadiiRecord, as_array, separation_scan
from reports.csv_records import thin_records, write_points_csv, write_records_csv
from reports.svg_plot import PlotSpec, write_svg
from sequences.digital import GeneratingMatrix, digital_prefix, faure_matrices, matrix_width_for
from sequences.halton import IntegerBaseSet, UnitPoint, halton_array, halton_prefix
from sequences.polynomial import PolyBaseSet, faure_bases, halton_type_prefix, parse_poly_bases
from utils.errors import InvalidInputError, QMCError

logger = logging.getLogger(__name__)

FAMILIES = ("halton", "halton-type", "digital")


@dataclass
class SequenceSpec:
    """One concrete sequence: integer bases, base polynomials or generating matrices."""
    family: str
    bases: Optional[IntegerBaseSet] = None
    poly_bases: Optional[PolyBaseSet] = None
    p: Optional[int] = None
    faure: bool = False

    @property
    def d(self) -> int:
        if self.bases is not None:
            return self.bases.d
        if self.poly_bases is not None:
            return self.poly_bases.d
        return self.p

    @property
    def label(self) -> str:
        if self.bases is not None:
            return f"halton {','.join(map(str, self.bases.bases))}"
        if self.family == "digital":
            return f"faure p={self.p} (digital)"
        return f"halton-type p={self.poly_bases.p} d={self.d}"

    def matrices(self, n_max: int) -> List[GeneratingMatrix]:
        width = max(matrix_width_for(self.p, n_max), 2)
        return faure_matrices(self.p, rows=width, cols=width)

    def prefix(self, N: int, start: int = 0) -> Iterator[UnitPoint]:
        if self.bases is not None:
            return halton_prefix(self.bases, N, start)
        if self.poly_bases is not None:
            return halton_type_prefix(self.poly_bases, N, start)
        return digital_prefix(self.matrices(N), N, start)

    def array(self, N: int) -> np.ndarray:
        if self.bases is not None:
            return halton_array(self.bases, N)
        return as_array(list(self.prefix(N)))

    def cover_bases(self):
        return self.bases if self.bases is not None else (self.poly_bases or faure_bases(self.p))


def build_sequence(family: str, bases: Optional[str] = None, p: Optional[int] = None,
                   polys: Optional[str] = None, faure: bool = False, d: Optional[int] = None) -> SequenceSpec:
    """Resolve CLI parameters into a SequenceSpec."""
    if family == "halton":
        if bases:
            return SequenceSpec(family, bases=IntegerBaseSet.parse(bases))
        if d:
            return SequenceSpec(family, bases=IntegerBaseSet.first_primes(d))
        raise InvalidInputError("halton needs --bases or --dims")
    if family == "halton-type":
        if p is None:
            raise InvalidInputError("halton-type needs --p")
        if faure:
            return SequenceSpec(family, poly_bases=faure_bases(p), p=p, faure=True)
        if not polys:
            raise InvalidInputError("halton-type needs --polys or --faure")
        return SequenceSpec(family, poly_bases=parse_poly_bases(polys, p), p=p)
    if family == "digital":
        if p is None or not faure:
            raise InvalidInputError("digital sequences are available as --p P --faure")
        faure_bases(p)
        return SequenceSpec(family, p=p, faure=True)
    raise InvalidInputError(f"unknown family {family!r}; choose from {', '.join(FAMILIES)}")


@dataclass
class ScanConfig:
    """Configuration for one scan run."""
    family: str
    N_max: int
    bases: Optional[str] = None
    p: Optional[int] = None
    polys: Optional[str] = None
    faure: bool = False
    dims: Optional[Tuple[int, int]] = None
    norm: NormKind = NormKind.EUCLIDEAN
    grid: Optional[int] = None
    dense: bool = False
    csv_path: Optional[str] = None
    svg_path: Optional[str] = None
    show_progress: bool = True

    def __post_init__(self):
        if self.N_max < 2:
            raise InvalidInputError(f"--max-n must be >= 2, got {self.N_max}")

    def sequences(self) -> List[SequenceSpec]:
        if self.dims:
            if self.family != "halton":
                raise InvalidInputError("--dims applies to the halton family (first-primes bases)")
            lo, hi = self.dims
            return [build_sequence("halton", d=d) for d in range(lo, hi + 1)]
        return [build_sequence(self.family, self.bases, self.p, self.polys, self.faure)]


@dataclass
class CommandResult:
    """Outcome of one command."""
    success: bool
    output_files: Dict[str, str] = field(default_factory=dict)
    summary: Dict[str, Any] = field(default_factory=dict)
    elapsed_seconds: float = 0.0


def print_stage(stage_num: int, total: int, message: str):
    """Print a stage header."""
    print(f"\n[Stage {stage_num}/{total}] {message}")
    print("-" * 60)


def print_progress(message: str, indent: int = 2):
    """Print a progress message with indentation."""
    print(" " * indent + f"-> {message}")


def parse_dims(text: str) -> Tuple[int, int]:
    try:
        lo, _, hi = text.partition("-")
        lo_d, hi_d = int(lo), int(hi or lo)
    except ValueError:
        raise InvalidInputError(f"bad --dims {text!r}; use lo-hi, e.g. 2-5") from None
    if lo_d < 1 or hi_d < lo_d:
        raise InvalidInputError(f"bad --dims {text!r}")
    return lo_d, hi_d


def _path_for(path: str, suffix: str, many: bool) -> str:
    if not many:
        return path
    root, ext = os.path.splitext(path)
    return f"{root}_{suffix}{ext}"


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------

def cmd_generate(args) -> CommandResult:
    seq = build_sequence(args.family, args.bases, args.p, args.polys, args.faure)
    if args.count < 1:
        raise InvalidInputError(f"--count must be >= 1, got {args.count}")
    points = seq.prefix(args.count)
    if args.csv:
        write_points_csv(args.csv, points)
        return CommandResult(True, output_files={"points": args.csv})
    sys.stdout.write(write_points_csv(None, points))
    return CommandResult(True)


def _with_covering(seq: SequenceSpec, arr: np.ndarray, records: List[RadiiRecord],
                   grid: int, norm: NormKind) -> List[RadiiRecord]:
    for r in records:
        r.h_est = covering_estimate(arr[:r.N], grid, norm).h_est
        r.h_bound = covering_upper_bound(seq.cover_bases(), r.N)
    return records


def cmd_scan(config: ScanConfig) -> CommandResult:
    result = CommandResult(False)
    seqs = config.sequences()
    series: List[Tuple[SequenceSpec, List[RadiiRecord]]] = []
    for i, seq in enumerate(seqs, start=1):
        if config.show_progress:
            print_stage(i, len(seqs), f"Scanning {seq.label}, N <= {config.N_max}")
        start = time.time()
        arr = seq.array(config.N_max)
        records = separation_scan(arr, config.N_max, config.norm)
        kept = thin_records(records, dense=config.dense)
        if config.grid:
            _with_covering(seq, arr, kept, config.grid, config.norm)
        series.append((seq, records))
        if config.show_progress:
            last = records[-1]
            print_progress(f"q(P_{last.N}) = {last.q:.6g}, q N^(1/d) = {last.q_scaled:.6g}")
            print_progress(f"{time.time() - start:.1f}s")
        if config.csv_path:
            path = _path_for(config.csv_path, f"d{seq.d}", len(seqs) > 1)
            write_records_csv(path, kept, dense=True)
            result.output_files[f"csv d={seq.d}"] = path
            if config.show_progress:
                print_progress(f"{len(kept)} rows -> {path}")
        result.summary[seq.label] = {"N": records[-1].N, "q": records[-1].q,
                                     "q_scaled": records[-1].q_scaled}
    if config.svg_path:
        spec = PlotSpec()
        for seq, records in series:
            spec.add(f"d = {seq.d}" if config.dims else seq.label, seq.d,
                     thin_records(records, dense=config.dense))
        write_svg(config.svg_path, spec)
        result.output_files["svg"] = config.svg_path
    result.success = True
    return result


def _build_certificates(args) -> List[Tuple[str, Dict[str, Any], Any]]:
    """(family tag, key params, builder) for every requested certificate."""
    jobs = []
    if args.family == "halton":
        bases = IntegerBaseSet.parse(args.bases or "2,3")
        for k in _parse_ints(args.k or "2"):
            def build(bases=bases, k=k):
                cert = halton_close_pair(bases, k)
                verify_certificate_chain(cert, strict=False)
                return cert
            jobs.append(("halton", {"bases": ",".join(map(str, bases.bases)), "k": k}, build))
        return jobs
    if args.family == "faure":
        case, p = 3, args.p or 3
    else:
        case = args.case or 1
        p = args.p
    for w in _parse_ints(args.w or "1"):
        params = {"case": case, "p": p, "w": w, "a": args.a or 0}
        jobs.append((f"halton_type_case{case}", params,
                     lambda case=case, p=p, w=w: _halton_type(case, p, w, args.a or 0)))
    return jobs


def _halton_type(case: int, p: Optional[int], w: int, a: int) -> PairCertificate:
    cert = halton_type_close_pair(case, p=p, w=w, a=a, verify=False)
    verify_certificate(cert, strict=False)
    return cert


def _parse_ints(text: str) -> List[int]:
    try:
        return [int(tok) for tok in str(text).split(",")]
    except ValueError:
        raise InvalidInputError(f"bad integer list {text!r}") from None


def cmd_certify(args) -> CommandResult:
    store = get_certificate_store(allow_local=args.allow_local_cache)
    jobs = _build_certificates(args)
    result = CommandResult(True)
    for i, (tag, params, build) in enumerate(jobs, start=1):
        label = ", ".join(f"{k}={v}" for k, v in params.items())
        if args.show_progress:
            print_stage(i, len(jobs), f"Certifying {tag} ({label})")
        key = certificate_key(tag, **params)
        cached = None if args.skip_cache else store.get(key)
        cert = None
        if cached is not None:
            cert = load_certificate(cached)
            verify_certificate(cert, strict=False)
            if cert.success:
                if args.show_progress:
                    print_progress("Loaded from cache and re-verified")
            else:
                logger.warning("[Cache] stored certificate %s failed re-verification, rebuilding", key[:12])
                cert = None
        if cert is None:
            cert = build()
            store.set(key, serialize_certificate(cert))
        if args.show_progress:
            _print_certificate(cert)
        if args.json:
            path = _path_for(args.json, str(i), len(jobs) > 1)
            save_json(path, serialize_certificate(cert))
            result.output_files[f"certificate {i}"] = path
        result.summary[f"{tag} {label}"] = cert.verdict.value
        result.success = result.success and cert.success
    return result


def _print_certificate(cert: PairCertificate) -> None:
    n_text = str(cert.n) if cert.n.bit_length() <= 256 else f"<{cert.n.bit_length()} bits>"
    m_text = str(cert.m) if cert.m.bit_length() <= 256 else f"<{cert.m.bit_length()} bits>"
    N_text = str(cert.N) if cert.N.bit_length() <= 256 else f"<{cert.N.bit_length()} bits>"
    print_progress(f"n = {n_text}, m = {m_text}, N = {N_text}")
    for cb in cert.coord_bounds:
        mark = "OK" if cb.verified else "FAIL"
        print_progress(f"coordinate {cb.coord} (base {cb.base}): shared {cb.shared_digits} digits, "
                       f"bound e^{cb.bound_log:.4g} [{mark}]", indent=4)
    failed = cert.failed_checks()
    print_progress(f"{len(cert.chain)} chain checks, {len(failed)} failed")
    for name in failed:
        print_progress(f"FAILED: {name}", indent=4)
    for note in cert.notes:
        print_progress(note, indent=4)
    print_progress(f"Verdict: {cert.verdict.value}")


def cmd_verify_file(path: str, show_progress: bool) -> CommandResult:
    cert = read_certificate(path)
    verify_certificate(cert, strict=False)
    if show_progress:
        _print_certificate(cert)
    return CommandResult(cert.success, summary={"certificate": path, "verdict": cert.verdict.value})


def cmd_verify(args) -> CommandResult:
    if args.certificate:
        return cmd_verify_file(args.certificate, args.show_progress)
    names = args.suite or ["all"]

    def report(r: SuiteResult) -> None:
        if args.show_progress:
            print_progress(f"{r.name:<14} {r.status.value} ({r.elapsed_seconds:.1f}s)")

    summary = run_suites(names, seed=args.seed, progress_path=args.progress, on_result=report)
    result = CommandResult(summary["success"], summary=summary["statistics"])
    if args.json:
        save_json(args.json, summary)
        result.output_files["summary"] = args.json
    return result


def cmd_cover(args) -> CommandResult:
    seq = build_sequence(args.family, args.bases, args.p, args.polys, args.faure)
    N = args.max_n
    if N < 2:
        raise InvalidInputError(f"--max-n must be >= 2, got {N}")
    norm = NormKind.parse(args.norm)
    arr = seq.array(N)
    est = covering_estimate(arr, args.grid, norm)
    bound = covering_upper_bound(seq.cover_bases(), N)
    q = separation_scan(arr, N, norm)[-1].q
    summary = {"sequence": seq.label, "N": N, "grid": args.grid, "norm": norm.value,
               "h_est": est.h_est, "discretization_error": est.discretization_error,
               "h_bound": bound, "q": q, "mesh_ratio": est.h_est / q if q > 0 else None,
               "consistent": est.h_est <= bound}
    if args.show_progress:
        print_progress(f"h_est = {est.h_est:.6g} (+ {est.discretization_error:.3g}), bound {bound:.6g}")
        print_progress(f"q = {q:.6g}, h_est / q = {summary['mesh_ratio']}")
    result = CommandResult(bool(summary["consistent"]), summary=summary)
    if args.json:
        save_json(args.json, summary)
        result.output_files["summary"] = args.json
    return result


# ---------------------------------------------------------------------------
# CLI
# ---------------------------------------------------------------------------

def _sequence_flags(p: argparse.ArgumentParser, family_default: str = "halton") -> None:
    p.add_argument("--family", choices=FAMILIES, default=family_default, help="Sequence family")
    p.add_argument("--bases", help="Integer bases, e.g. 2,3,5")
    p.add_argument("--p", type=int, help="Prime field for halton-type and digital families")
    p.add_argument("--polys", help='Base polynomials as little-endian coefficients, e.g. "0,1;1,1"')
    p.add_argument("--faure", action="store_true", help="Use the Faure bases X - c (or Pascal matrices)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        description="Low-discrepancy sequences, separation radii and close-pair certificates",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  # Halton points
  python run_qmc.py generate --family halton --bases 2,3 --count 8

  # Separation radius in dimensions 2..5 with a log-log plot
  python run_qmc.py scan --family halton --dims 2-5 --max-n 100000 --csv out/q.csv --svg out/q.svg

  # Certificates
  python run_qmc.py certify halton --bases 2,3 --k 2,7
  python run_qmc.py certify halton-type --case 2 --w 1
  python run_qmc.py certify faure --p 3 --w 1 --json out/faure.json

  # Property suites
  python run_qmc.py verify --suite all --seed 0

Environment variables (optional, also read from .env):
  QMC_INDEX_BIT_CAP, QMC_EXACT_EXPONENT_BITS, QMC_LOG_SLACK, QMC_CERT_CACHE_DIR, ...
""",
    )
    parser.add_argument("-q", "--quiet", action="store_true", help="Suppress progress output")
    parser.add_argument("-v", "--verbose", action="store_true", help="Debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="List sequence points as CSV")
    _sequence_flags(gen)
    gen.add_argument("--count", type=int, default=16, help="Number of points (default: 16)")
    gen.add_argument("--csv", help="Output CSV (default: standard output)")

    scan = sub.add_parser("scan", help="Separation radius for every prefix")
    _sequence_flags(scan)
    scan.add_argument("--dims", help="Dimension range lo-hi with first-primes Halton bases")
    scan.add_argument("--max-n", type=int, default=1000, help="Largest N (default: 1000)")
    scan.add_argument("--norm", default="l2", help="l2 or linf (default: l2)")
    scan.add_argument("--grid", type=int, help="Also estimate h(P_N) on a G^d lattice for the kept rows")
    scan.add_argument("--dense", action="store_true", help="Keep every N instead of powers of 2 and 10")
    scan.add_argument("--csv", help="Output CSV (suffixed _d<d> per dimension when scanning several)")
    scan.add_argument("--svg", help="Output SVG plot")

    cert = sub.add_parser("certify", help="Build and verify close-pair certificates")
    cert.add_argument("family", choices=["halton", "halton-type", "faure"])
    cert.add_argument("--bases", help="Integer bases (halton, default 2,3)")
    cert.add_argument("--k", help="Comma list of orders k (halton, default 2)")
    cert.add_argument("--case", type=int, choices=[1, 2, 3], help="Halton-type construction (default 1)")
    cert.add_argument("--p", type=int, help="Prime (case 1: 2, faure: 3 by default)")
    cert.add_argument("--w", help="Comma list of orders w (default 1)")
    cert.add_argument("--a", type=int, help="Shift of case 1 (default 0)")
    cert.add_argument("--json", help="Output certificate JSON (suffixed _<i> when several)")
    cert.add_argument("--skip-cache", action="store_true", help="Rebuild even when a cached certificate exists")
    cert.add_argument("--allow-local-cache", action="store_true",
                      help="Cache certificates on the local filesystem")

    ver = sub.add_parser("verify", help="Run property suites or re-verify a certificate file")
    ver.add_argument("--suite", action="append", choices=list(SUITES) + ["all"], help="Repeatable")
    ver.add_argument("--certificate", help="Certificate JSON to re-verify instead of running suites")
    ver.add_argument("--seed", type=int, default=0, help="Seed for randomized suites (default: 0)")
    ver.add_argument("--json", help="Write the suite summary as JSON")
    ver.add_argument("--progress", help="Progress JSON rewritten after each suite")

    cov = sub.add_parser("cover", help="Covering radius estimate and bound at one N")
    _sequence_flags(cov)
    cov.add_argument("--max-n", type=int, default=256, help="N (default: 256)")
    cov.add_argument("--grid", type=int, default=257, help="Lattice resolution G (default: 257)")
    cov.add_argument("--norm", default="l2", help="l2 or linf (default: l2)")
    cov.add_argument("--json", help="Write the summary as JSON")
    return parser


def run_command(args) -> CommandResult:
    if args.command == "generate":
        return cmd_generate(args)
    if args.command == "scan":
        config = ScanConfig(
            family=args.family, N_max=args.max_n, bases=args.bases, p=args.p,
            polys=args.polys, faure=args.faure,
            dims=parse_dims(args.dims) if args.dims else None,
            norm=NormKind.parse(args.norm), grid=args.grid, dense=args.dense,
            csv_path=args.csv, svg_path=args.svg, show_progress=args.show_progress,
        )
        return cmd_scan(config)
    if args.command == "certify":
        return cmd_certify(args)
    if args.command == "verify":
        return cmd_verify(args)
    return cmd_cover(args)


def main(argv: Optional[List[str]] = None) -> int:
    """CLI entry point; returns the exit code."""
    parser = build_parser()
    args = parser.parse_args(argv)
    load_dotenv()
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else (logging.WARNING if args.quiet else logging.INFO),
        format="%(message)s",
    )
    # progress lines are printed unless --quiet; generate writes data to stdout
    args.show_progress = not args.quiet and args.command != "generate"
    start = time.time()
    try:
        result = run_command(args)
    except QMCError as e:
        print(f"Error: {e}", file=sys.stderr)
        return 1
    result.elapsed_seconds = time.time() - start
    if args.show_progress:
        print("\n" + "=" * 60)
        print(f"[OK] {args.command} completed" if result.success else f"[ERROR] {args.command} failed")
        for name, path in result.output_files.items():
            print(f"  {name}: {path}")
        print(f"Finished: {datetime.now().strftime('%Y-%m-%d %H:%M:%S')} ({result.elapsed_seconds:.1f}s)")
        print("=" * 60)
    return 0 if result.success else 1


if __name__ == "__main__":
    sys.exit(main())
