"""Shared fixtures: project root on sys.path, fresh config and certificate store per test."""
import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from certificates.certificate_store import reset_certificate_store
from utils.config import set_config


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: long-running scans and large certificates")


@pytest.fixture(autouse=True)
def fresh_state():
    set_config(None)
    reset_certificate_store()
    yield
    set_config(None)
    reset_certificate_store()
