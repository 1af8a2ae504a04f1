"""Runtime configuration read from the environment (and an optional .env file)."""
from __future__ import annotations

import os
from dataclasses import dataclass, fields
from typing import Optional

from dotenv import load_dotenv


@dataclass(frozen=True)
class QMCConfig:
    """Resource caps and numeric policies."""
    exact_exponent_bits: int = 100_000       # exponent equalities compared exactly below this size
    index_bit_cap: int = 8_000_000           # largest certificate index we construct
    census_cap: int = 1 << 16                # largest N' binned by the interval census
    cover_sample_cap: int = 1 << 22           # largest G^d lattice for covering estimates
    log_slack: float = 1e-9                  # relative slack of log-domain comparisons
    matrix_depth: int = 64                   # digit rows of truncated generating matrices
    digit_split_bits: int = 10_000           # divide-and-conquer threshold for digit extraction
    dirichlet_cap: int = 1 << 22             # largest c_2 range searched
    cert_cache_dir: str = ".certificate_cache"

    @classmethod
    def from_env(cls, dotenv_path: Optional[str] = None) -> "QMCConfig":
        """Build a config from QMC_* environment variables, falling back to defaults."""
        load_dotenv(dotenv_path)
        values = {}
        for f in fields(cls):
            raw = os.getenv(f"QMC_{f.name.upper()}")
            if raw is None:
                continue
            if f.type in ("int", int):
                values[f.name] = int(float(raw))
            elif f.type in ("float", float):
                values[f.name] = float(raw)
            else:
                values[f.name] = raw
        return cls(**values)


_config: Optional[QMCConfig] = None


def get_config() -> QMCConfig:
    """Return the process-wide config, reading the environment on first use."""
    global _config
    if _config is None:
        _config = QMCConfig.from_env()
    return _config


def set_config(config: Optional[QMCConfig]) -> None:
    """Replace (or with ``None`` reset) the process-wide config."""
    global _config
    _config = config
