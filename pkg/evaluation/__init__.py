"""
Evaluation module - property suites over sequences and certificates.
"""

from .suites import SUITES, SuiteResult, SuiteStatus, run_suite, run_suites

__all__ = [
    "SUITES",
    "SuiteResult",
    "SuiteStatus",
    "run_suite",
    "run_suites",
]
