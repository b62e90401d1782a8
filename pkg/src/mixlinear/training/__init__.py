"""Gradients, optimization, and the training/evaluation loop."""

from .adam import OptimizerState, adam_step, init_adam
from .backward import GradCheckResult, GradientSet, backward, grad_check
from .loop import (
    TrainConfig,
    TrainHistory,
    batch_size_for_channels,
    evaluate,
    read_history,
    train,
    write_history,
)
from .loss import mae_loss, mse_loss

__all__ = [
    "OptimizerState",
    "adam_step",
    "init_adam",
    "GradCheckResult",
    "GradientSet",
    "backward",
    "grad_check",
    "TrainConfig",
    "TrainHistory",
    "batch_size_for_channels",
    "evaluate",
    "read_history",
    "train",
    "write_history",
    "mae_loss",
    "mse_loss",
]
