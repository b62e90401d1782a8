"""Forward computation: trend decoupling, the two branches, merge, upsample.

The public single-series operations are thin wrappers over a batched
engine that evaluates whole (batch, lookback) blocks with numpy matmuls.
``forward_batch_with_trace`` additionally records the intermediate
activations the reverse pass needs.
"""

from dataclasses import dataclass

import numpy as np

from ..numerics import (
    conv1d_same_batch,
    conv_pad_split,
    idft_matrix,
    rfft_batch,
)
from .config import Mode, ModelConfig, ShapePlan, check_spectral_bounds, plan_shapes
from .params import MixLinearParams


@dataclass
class ForwardTrace:
    """Intermediate activations cached for the reverse pass."""

    x_norm_padded: np.ndarray          # (B, L + w - 1) conv input incl. zero pad
    rows: np.ndarray | None = None     # (B, w, n) unpadded trend rows (baseline)
    rows_padded: np.ndarray | None = None   # (B, w, n_hat) branch input
    seg_inter_in: np.ndarray | None = None  # (B, w, seg_out, seg_in)
    spec_lpf: np.ndarray | None = None      # (B, w, cutoff) complex
    latent: np.ndarray | None = None        # (B, w, latent) complex


def _trend_rows(x2d: np.ndarray, params: MixLinearParams, config: ModelConfig,
                plan: ShapePlan):
    """Mean-center, aggregate, downsample into the (B, w, n) phase rows."""
    batch, length = x2d.shape
    w = config.period
    mean = x2d.mean(axis=1)
    x_norm = x2d - mean[:, None]

    left, right = conv_pad_split(w)
    x_norm_padded = np.zeros((batch, length + left + right))
    x_norm_padded[:, left:left + length] = x_norm
    aggregated = conv1d_same_batch(x_norm, params.conv_kernel, float(params.conv_bias)) + x_norm

    # De-interleave into w phase subsequences of length n; positions past
    # the lookback (when n*w > L) stay zero.
    padded_len = plan.n * w
    flat = np.zeros((batch, padded_len))
    flat[:, :length] = aggregated
    rows = np.ascontiguousarray(flat.reshape(batch, plan.n, w).transpose(0, 2, 1))
    return rows, mean, x_norm_padded


def _time_branch_core(rows_padded: np.ndarray, params: MixLinearParams,
                      plan: ShapePlan, trace: ForwardTrace | None):
    """(B, w, n_hat) -> (B, w, m) through the two segment maps."""
    batch, w, _ = rows_padded.shape
    segments = rows_padded.reshape(batch, w, plan.seg_in, plan.seg_in)
    intra = segments @ params.w_intra.T + params.b_intra       # (B, w, seg_in, seg_out)
    inter_in = np.ascontiguousarray(intra.swapaxes(-1, -2))    # (B, w, seg_out, seg_in)
    if trace is not None:
        trace.seg_inter_in = inter_in
    inter = inter_in @ params.w_inter.T + params.b_inter       # (B, w, seg_out, seg_out)
    return inter.reshape(batch, w, plan.m_hat)[:, :, :plan.m]


def _freq_branch_core(rows_padded: np.ndarray, params: MixLinearParams,
                      plan: ShapePlan, config: ModelConfig,
                      trace: ForwardTrace | None):
    """(B, w, n_hat) -> (B, w, m) through the latent spectral pipeline."""
    spectrum = rfft_batch(rows_padded)                   # (B, w, bins_in)
    spec_lpf = spectrum[:, :, :config.lpf_cutoff]
    latent = spec_lpf @ params.w_enc.T                   # (B, w, latent)
    recon = latent @ params.w_dec.T                      # (B, w, bins_out)
    if trace is not None:
        trace.spec_lpf = spec_lpf
        trace.latent = latent
    full = (recon @ idft_matrix(plan.m_hat).T).real      # (B, w, m_hat)
    return full[:, :, :plan.m]


def forward_batch(x2d: np.ndarray, params: MixLinearParams, config: ModelConfig,
                  plan: ShapePlan | None = None) -> np.ndarray:
    """Predict (B, horizon) from (B, lookback); no trace."""
    pred, _ = _forward_impl(x2d, params, config, plan, want_trace=False)
    return pred


def forward_batch_with_trace(x2d: np.ndarray, params: MixLinearParams,
                             config: ModelConfig,
                             plan: ShapePlan | None = None):
    return _forward_impl(x2d, params, config, plan, want_trace=True)


def _forward_impl(x2d, params, config, plan, want_trace):
    x2d = np.asarray(x2d, dtype=np.float64)
    if x2d.ndim != 2 or x2d.shape[1] != config.lookback:
        raise ValueError(
            f"expected input of shape (batch, {config.lookback}), got {x2d.shape}"
        )
    if plan is None:
        plan = plan_shapes(config)
    check_spectral_bounds(config, plan)

    batch = x2d.shape[0]
    w = config.period
    rows, mean, x_norm_padded = _trend_rows(x2d, params, config, plan)
    trace = ForwardTrace(x_norm_padded=x_norm_padded) if want_trace else None

    if config.mode is Mode.SPARSE_BASELINE:
        if trace is not None:
            trace.rows = rows
        out_rows = rows @ params.w_point.T                    # (B, w, m)
    else:
        rows_padded = np.zeros((batch, w, plan.n_hat))
        rows_padded[:, :, :plan.n] = rows
        if trace is not None:
            trace.rows_padded = rows_padded
        out_rows = np.zeros((batch, w, plan.m))
        if config.has_time_branch:
            out_rows += _time_branch_core(rows_padded, params, plan, trace)
        if config.has_freq_branch:
            out_rows += _freq_branch_core(rows_padded, params, plan, config, trace)

    out_rows = out_rows + mean[:, None, None]
    # Re-interleave: sequence[j*w + i] = row_i[j], then keep the horizon.
    sequence = out_rows.transpose(0, 2, 1).reshape(batch, plan.m * w)
    return sequence[:, :config.horizon], trace


# ---------------------------------------------------------------------------
# public single-series operations


def decompose_trend(x, params: MixLinearParams, config: ModelConfig):
    """Split one lookback window into its (period, n) trend matrix.

    Returns (trend, window_mean): row i of the trend matrix is the
    aggregated, mean-centered subsequence at phase offset i.
    """
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1 or x.size != config.lookback:
        raise ValueError(f"expected length-{config.lookback} input, got shape {x.shape}")
    plan = plan_shapes(config)
    rows, mean, _ = _trend_rows(x[None, :], params, config, plan)
    return rows[0], float(mean[0])


def time_branch(trend_row, params: MixLinearParams, plan: ShapePlan) -> np.ndarray:
    """Map one length-n trend row to its length-m time-domain prediction."""
    row = np.asarray(trend_row, dtype=np.float64)
    if row.ndim != 1 or row.size != plan.n:
        raise ValueError(f"expected length-{plan.n} trend row, got shape {row.shape}")
    padded = np.zeros((1, 1, plan.n_hat))
    padded[0, 0, :plan.n] = row
    return _time_branch_core(padded, params, plan, None)[0, 0]


def freq_branch(trend_row_padded, params: MixLinearParams, plan: ShapePlan,
                config: ModelConfig) -> np.ndarray:
    """Map one padded (length n_hat) trend row through the spectral pipeline."""
    row = np.asarray(trend_row_padded, dtype=np.float64)
    if row.ndim != 1 or row.size != plan.n_hat:
        raise ValueError(
            f"expected length-{plan.n_hat} padded trend row, got shape {row.shape}"
        )
    check_spectral_bounds(config, plan)
    return _freq_branch_core(row[None, None, :], params, plan, config, None)[0, 0]


def forward(x, params: MixLinearParams, config: ModelConfig) -> np.ndarray:
    """Predict the next ``horizon`` values of one univariate window."""
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1:
        raise ValueError(f"expected a 1-D window, got shape {x.shape}")
    return forward_batch(x[None, :], params, config)[0]


def forward_multichannel(table, params: MixLinearParams, config: ModelConfig) -> np.ndarray:
    """Channel-independent forecast: one shared parameter set per column.

    Input (lookback, C) -> output (horizon, C); columns never interact.
    """
    table = np.asarray(table, dtype=np.float64)
    if table.ndim != 2 or table.shape[0] != config.lookback or table.shape[1] < 1:
        raise ValueError(
            f"expected shape ({config.lookback}, C>=1), got {table.shape}"
        )
    return forward_batch(table.T, params, config).T
