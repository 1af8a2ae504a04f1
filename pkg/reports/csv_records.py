"""
CSV files for separation scans and point listings (pandas).

Floats are written with 17 significant digits and read back with
``float_precision="round_trip"``, so a reparsed file equals the records
it came from.
"""
from __future__ import annotations

import logging
from typing import Iterable, List, Optional, Sequence

import pandas as pd

from geometry.radii import RadiiRecord
from sequences.halton import UnitPoint
from utils.errors import InvalidInputError
from utils.files import write_text_atomic

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.17g"
RADII_COLUMNS = ["N", "q", "q_scaled"]
COVER_COLUMNS = ["h_est", "h_bound"]


def _csv_text(df: pd.DataFrame) -> str:
    return df.to_csv(index=False, float_format=FLOAT_FORMAT, lineterminator="\n")


def _is_power(n: int, base: int) -> bool:
    while n > 1 and n % base == 0:
        n //= base
    return n == 1


def thin_records(records: Sequence[RadiiRecord], dense: bool = False) -> List[RadiiRecord]:
    """Keep N that are powers of 2 or 10, plus the last record; everything when ``dense``."""
    if dense or not records:
        return list(records)
    last = records[-1].N
    return [r for r in records if _is_power(r.N, 2) or _is_power(r.N, 10) or r.N == last]


def records_frame(records: Sequence[RadiiRecord]) -> pd.DataFrame:
    """DataFrame with columns N, q, q_scaled and, when any record has them, h_est, h_bound."""
    columns = list(RADII_COLUMNS)
    if any(r.h_est is not None or r.h_bound is not None for r in records):
        columns += COVER_COLUMNS
    df = pd.DataFrame([r.to_dict() for r in records], columns=RADII_COLUMNS + COVER_COLUMNS)[columns]
    df["N"] = df["N"].astype("int64")
    return df


def write_records_csv(path: str, records: Sequence[RadiiRecord], dense: bool = False) -> int:
    """Write (thinned) records; returns the number of rows written."""
    rows = thin_records(records, dense=dense)
    if not rows:
        raise InvalidInputError("no records to write")
    write_text_atomic(path, _csv_text(records_frame(rows)))
    logger.debug("[Report] %d records -> %s", len(rows), path)
    return len(rows)


def read_records_csv(path: str) -> List[RadiiRecord]:
    df = pd.read_csv(path, float_precision="round_trip")
    missing = [c for c in RADII_COLUMNS if c not in df.columns]
    if missing:
        raise InvalidInputError(f"{path}: missing columns {missing}")
    out: List[RadiiRecord] = []
    for row in df.itertuples(index=False):
        h_est = getattr(row, "h_est", None)
        h_bound = getattr(row, "h_bound", None)
        out.append(RadiiRecord(
            N=int(row.N), q=float(row.q), q_scaled=float(row.q_scaled),
            h_est=None if h_est is None or pd.isna(h_est) else float(h_est),
            h_bound=None if h_bound is None or pd.isna(h_bound) else float(h_bound),
        ))
    return out


def points_frame(points: Iterable[UnitPoint], start: int = 0) -> pd.DataFrame:
    """Rows n, x1, ..., xd."""
    rows = [(start + i,) + p.coords for i, p in enumerate(points)]
    if not rows:
        raise InvalidInputError("no points to write")
    d = len(rows[0]) - 1
    df = pd.DataFrame(rows, columns=["n"] + [f"x{j}" for j in range(1, d + 1)])
    df["n"] = df["n"].astype("int64")
    return df


def write_points_csv(path: Optional[str], points: Iterable[UnitPoint], start: int = 0) -> str:
    """Write the point listing to ``path``, or return it as text when ``path`` is None."""
    text = _csv_text(points_frame(points, start=start))
    if path is None:
        return text
    return write_text_atomic(path, text)
