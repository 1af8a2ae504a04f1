"""
JSON form of PairCertificate.

Big integers (n, m, N, M) are written as decimal strings so million-bit
indices round-trip without the int/str digit limit; log quantities stay
doubles.
"""
from __future__ import annotations

import json
from typing import Any, Dict

from algebra.digits import from_decimal, to_decimal
from certificates.logdomain import ChainCheck
from certificates.model import CertificateVerdict, CoordinateBound, Family, PairCertificate
from utils.errors import InvalidInputError
from utils.files import write_text_atomic


def save_json(filepath: str, data: Any) -> None:
    """Write JSON atomically (temp file in the same directory, then rename)."""
    write_text_atomic(filepath, json.dumps(data, indent=2, ensure_ascii=False))


def load_json(filepath: str) -> Any:
    with open(filepath, "r", encoding="utf-8") as f:
        return json.load(f)


def _dec(value) -> Any:
    return None if value is None else to_decimal(value)


def _undec(text) -> Any:
    return None if text is None else from_decimal(str(text))


def serialize_certificate(cert: PairCertificate) -> Dict[str, Any]:
    """Plain-dict form suitable for ``save_json``."""
    return {
        "family": cert.family.value,
        "params": cert.params,
        "r": cert.r,
        "k": cert.k,
        "c": list(cert.c),
        "ell": cert.ell,
        "M_dec": _dec(cert.M),
        "N_dec": _dec(cert.N),
        "n_dec": _dec(cert.n),
        "m_dec": _dec(cert.m),
        "condition_met": cert.condition_met,
        "coord_bounds": [cb.to_dict() for cb in cert.coord_bounds],
        "chain": [ch.to_dict() for ch in cert.chain],
        "verdict": cert.verdict.value,
        "notes": list(cert.notes),
    }


def load_certificate(data: Dict[str, Any]) -> PairCertificate:
    """Inverse of ``serialize_certificate``."""
    try:
        return PairCertificate(
            family=Family(data["family"]),
            params=dict(data["params"]),
            n=_undec(data["n_dec"]),
            m=_undec(data["m_dec"]),
            N=_undec(data["N_dec"]),
            r=data.get("r"),
            k=data.get("k"),
            c=tuple(data.get("c") or ()),
            ell=data.get("ell"),
            M=_undec(data.get("M_dec")),
            condition_met=bool(data.get("condition_met", True)),
            coord_bounds=[CoordinateBound.from_dict(cb) for cb in data.get("coord_bounds", [])],
            chain=[ChainCheck.from_dict(ch) for ch in data.get("chain", [])],
            verdict=CertificateVerdict(data.get("verdict", CertificateVerdict.UNVERIFIED.value)),
            notes=list(data.get("notes", [])),
        )
    except (KeyError, ValueError, TypeError) as e:
        raise InvalidInputError(f"malformed certificate: {e}") from e


def save_certificate(filepath: str, cert: PairCertificate) -> None:
    save_json(filepath, serialize_certificate(cert))


def read_certificate(filepath: str) -> PairCertificate:
    return load_certificate(load_json(filepath))
