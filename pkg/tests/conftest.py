"""Shared fixtures and helpers."""

import os
import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from mixlinear.model.config import Mode, ModelConfig, plan_shapes

REPO_ROOT = Path(__file__).resolve().parent.parent


def etth1_path() -> Path | None:
    """Locate ETTh1.csv; acceptance reproduction tests skip without it."""
    env = os.environ.get("MIXLINEAR_ETTH1")
    candidates = []
    if env:
        candidates.append(Path(env))
    candidates.append(REPO_ROOT / "data" / "ETTh1.csv")
    candidates.append(Path(__file__).parent / "data" / "ETTh1.csv")
    for candidate in candidates:
        if candidate.is_file():
            return candidate
    return None


def require_etth1() -> Path:
    path = etth1_path()
    if path is None:
        pytest.skip(
            "ETTh1.csv not available; place it at data/ETTh1.csv or set "
            "MIXLINEAR_ETTH1 to enable the published-benchmark criteria"
        )
    return path


def random_small_config(rng: np.random.Generator, modes=tuple(Mode),
                        max_lookback: int = 16, max_horizon: int = 16) -> ModelConfig:
    lookback = int(rng.integers(2, max_lookback + 1))
    horizon = int(rng.integers(1, max_horizon + 1))
    period = int(rng.integers(1, lookback + 1))
    mode = modes[int(rng.integers(0, len(modes)))]
    probe = ModelConfig(lookback, horizon, period, lpf_cutoff=1, latent_width=1, mode=mode)
    bins_in = plan_shapes(probe).bins_in
    cutoff = int(rng.integers(1, bins_in + 1))
    # latent may exceed the cutoff (the spectral encoder is allowed to expand)
    latent = int(rng.integers(1, cutoff + 2))
    return ModelConfig(lookback, horizon, period, lpf_cutoff=cutoff,
                       latent_width=latent, mode=mode)
