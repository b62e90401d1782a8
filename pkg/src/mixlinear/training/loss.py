"""Loss metrics."""

import numpy as np


def mse_loss(pred, target) -> float:
    """Mean over all entries of the squared prediction error."""
    p = np.asarray(pred, dtype=np.float64)
    t = np.asarray(target, dtype=np.float64)
    if p.shape != t.shape:
        raise ValueError(f"shape mismatch: pred {p.shape} vs target {t.shape}")
    if p.size == 0:
        raise ValueError("empty prediction")
    return float(np.mean((p - t) ** 2))


def mae_loss(pred, target) -> float:
    """Mean over all entries of the absolute prediction error."""
    p = np.asarray(pred, dtype=np.float64)
    t = np.asarray(target, dtype=np.float64)
    if p.shape != t.shape:
        raise ValueError(f"shape mismatch: pred {p.shape} vs target {t.shape}")
    if p.size == 0:
        raise ValueError("empty prediction")
    return float(np.mean(np.abs(p - t)))
