"""Family dispatch for (re)verifying a certificate, e.g. one loaded from JSON."""
from __future__ import annotations

from certificates.dirichlet import balance_checks
from certificates.halton_pair import verify_certificate_chain, verify_pair_digit_agreement
from certificates.halton_type_pair import verify_halton_type_pair
from certificates.model import CertificateVerdict, Family, PairCertificate


def verify_certificate(cert: PairCertificate, strict: bool = True) -> CertificateVerdict:
    """Recompute every per-coordinate bound and chain check from n, m and the parameters."""
    cert.coord_bounds = []
    cert.notes = []
    cert.verdict = CertificateVerdict.UNVERIFIED
    if cert.family is Family.HALTON:
        bases = tuple(cert.params["bases"])
        exps = tuple(cert.r * cj * bases[0] ** cert.k for cj in cert.c)
        cert.chain = balance_checks(bases, cert.r, exps)
        verify_pair_digit_agreement(cert, strict=strict)
        return verify_certificate_chain(cert, strict=strict)
    return verify_halton_type_pair(cert, strict=strict)
