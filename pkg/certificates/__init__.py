"""
Close-pair certificates: construction, verification, JSON form and storage.
"""

from .halton_pair import halton_close_pair, verify_certificate_chain, verify_pair_digit_agreement
from .halton_type_pair import halton_type_close_pair, verify_halton_type_pair
from .model import CertificateVerdict, CoordinateBound, Family, PairCertificate
from .serialize import load_certificate, read_certificate, save_certificate, serialize_certificate
from .verify import verify_certificate

__all__ = [
    "halton_close_pair",
    "verify_certificate_chain",
    "verify_pair_digit_agreement",
    "halton_type_close_pair",
    "verify_halton_type_pair",
    "CertificateVerdict",
    "CoordinateBound",
    "Family",
    "PairCertificate",
    "load_certificate",
    "read_certificate",
    "save_certificate",
    "serialize_certificate",
    "verify_certificate",
]
