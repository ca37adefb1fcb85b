"""Shifted Waring Lab: Certificates, Gap Constants and Verification."""

from src.certify.chain import (
    certificate_with,
    check_certificate,
    derive_constants,
    evaluate_chain,
)
from src.certify.gap import closing_checks, gap_constants
from src.certify.models import (
    Certificate,
    ChainConstant,
    GapConstants,
    Inequality,
    VerificationReport,
    VerifyEntry,
)
from src.certify.verify import verify_certificate

__all__ = [
    "Certificate",
    "ChainConstant",
    "GapConstants",
    "Inequality",
    "VerificationReport",
    "VerifyEntry",
    "certificate_with",
    "check_certificate",
    "closing_checks",
    "derive_constants",
    "evaluate_chain",
    "gap_constants",
    "verify_certificate",
]
