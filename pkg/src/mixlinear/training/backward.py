"""Reverse-mode gradients through the fixed forecaster graph.

The graph is small and static, so the adjoints are written out by hand,
mirroring the forward pass stage by stage: linear maps transpose (complex
ones conjugate-transpose, with gradients taken with respect to the
independent real/imaginary components), index moves (pad, truncate,
reshape, interleave) route gradients by index, and the inverse-DFT
adjoint picks up the Hermitian pairing weights of its coefficient matrix.
"""

from dataclasses import dataclass

import numpy as np

from ..model.config import Mode, ModelConfig, plan_shapes
from ..model.forward import ForwardTrace, forward_batch, forward_batch_with_trace
from ..model.params import MixLinearParams
from ..numerics import dft_matrix, idft_matrix

GradientSet = dict[str, np.ndarray]


def _flatten_windows(batch: np.ndarray, length: int, what: str) -> np.ndarray:
    """(B, T) or (B, T, C) -> (B*C, T) univariate rows."""
    arr = np.asarray(batch, dtype=np.float64)
    if arr.ndim == 2:
        arr = arr[:, :, None]
    if arr.ndim != 3 or arr.shape[1] != length:
        raise ValueError(
            f"{what} must have shape (B, {length}) or (B, {length}, C), got {arr.shape}"
        )
    return np.ascontiguousarray(arr.transpose(0, 2, 1).reshape(-1, length))


def backward(x_batch, y_batch, params: MixLinearParams,
             config: ModelConfig) -> tuple[float, GradientSet]:
    """Mean-squared-error loss of a window batch and its parameter gradients.

    Accepts (B, L[, C]) inputs and (B, H[, C]) targets; channels are
    flattened into the batch under the channel-independent strategy.
    Gradients are averaged over every predicted scalar, matching the
    returned loss = mean((forward(x) - y)^2).
    """
    x2d = _flatten_windows(x_batch, config.lookback, "inputs")
    y2d = _flatten_windows(y_batch, config.horizon, "targets")
    if x2d.shape[0] == 0:
        raise ValueError("empty batch")
    if x2d.shape[0] != y2d.shape[0]:
        raise ValueError(
            f"batch size mismatch: {x2d.shape[0]} inputs vs {y2d.shape[0]} targets"
        )
    plan = plan_shapes(config)
    pred, trace = forward_batch_with_trace(x2d, params, config, plan)
    diff = pred - y2d
    loss = float(np.mean(diff * diff))
    grad_pred = (2.0 / diff.size) * diff
    grads = _backprop(grad_pred, trace, params, config, plan)
    return loss, grads


def _backprop(grad_pred, trace: ForwardTrace, params, config, plan) -> GradientSet:
    batch = grad_pred.shape[0]
    w = config.period

    # undo horizon truncation and the interleave
    grad_seq = np.zeros((batch, plan.m * w))
    grad_seq[:, :config.horizon] = grad_pred
    grad_rows_out = grad_seq.reshape(batch, plan.m, w).transpose(0, 2, 1)

    grads: GradientSet = {}
    if config.mode is Mode.SPARSE_BASELINE:
        rows = trace.rows
        grads["w_point"] = np.einsum("bwm,bwn->mn", grad_rows_out, rows)
        grad_rows = grad_rows_out @ params.w_point
    else:
        grad_padded = np.zeros((batch, w, plan.n_hat))
        if config.has_time_branch:
            grad_padded += _time_branch_grads(grad_rows_out, trace, params, plan, grads)
        if config.has_freq_branch:
            grad_padded += _freq_branch_grads(grad_rows_out, trace, params, config,
                                              plan, grads)
        grad_rows = grad_padded[:, :, :plan.n]

    # undo the phase de-interleave, drop the zero-filled tail
    grad_flat = grad_rows.transpose(0, 2, 1).reshape(batch, plan.n * w)
    grad_agg = grad_flat[:, :config.lookback]

    # aggregated = conv(x_norm) + x_norm; only the conv path carries params
    length = config.lookback
    x_norm_padded = trace.x_norm_padded
    kernel_grad = np.empty(w)
    for i in range(w):
        kernel_grad[i] = np.sum(x_norm_padded[:, i:i + length] * grad_agg)
    conv_grads = {"conv_kernel": kernel_grad, "conv_bias": np.asarray(grad_agg.sum())}
    # keep checkpoint/declaration order
    ordered: GradientSet = conv_grads
    for name, _ in params.named_arrays():
        if name in grads:
            ordered[name] = grads[name]
    return ordered


def _time_branch_grads(grad_out, trace, params, plan, grads):
    batch, w, _ = grad_out.shape
    grad_tp_flat = np.zeros((batch, w, plan.m_hat))
    grad_tp_flat[:, :, :plan.m] = grad_out
    grad_tp = grad_tp_flat.reshape(batch, w, plan.seg_out, plan.seg_out)

    inter_in = trace.seg_inter_in
    grads["w_inter"] = np.einsum("bwpq,bwpr->qr", grad_tp, inter_in)
    grads["b_inter"] = grad_tp.sum(axis=(0, 1, 2))
    grad_inter_in = grad_tp @ params.w_inter                 # (B, w, seg_out, seg_in)

    grad_intra = grad_inter_in.swapaxes(-1, -2)              # (B, w, seg_in, seg_out)
    segments = trace.rows_padded.reshape(batch, w, plan.seg_in, plan.seg_in)
    grads["w_intra"] = np.einsum("bwpq,bwpr->qr", grad_intra, segments)
    grads["b_intra"] = grad_intra.sum(axis=(0, 1, 2))
    grad_segments = grad_intra @ params.w_intra              # (B, w, seg_in, seg_in)
    return grad_segments.reshape(batch, w, plan.n_hat)


def _freq_branch_grads(grad_out, trace, params, config, plan, grads):
    batch, w, _ = grad_out.shape
    grad_full = np.zeros((batch, w, plan.m_hat))
    grad_full[:, :, :plan.m] = grad_out

    # adjoint of x = real(recon @ G^T) is grad @ conj(G): paired bins get
    # the doubled weight G carries, DC/Nyquist do not
    grad_recon = grad_full @ idft_matrix(plan.m_hat).conj()  # (B, w, bins_out)

    latent = trace.latent
    grad_dec = np.einsum("bwk,bwz->kz", grad_recon, latent.conj())
    grads["w_dec_re"] = grad_dec.real
    grads["w_dec_im"] = grad_dec.imag
    grad_latent = grad_recon @ params.w_dec.conj()           # (B, w, latent)

    spec_lpf = trace.spec_lpf
    grad_enc = np.einsum("bwz,bwc->zc", grad_latent, spec_lpf.conj())
    grads["w_enc_re"] = grad_enc.real
    grads["w_enc_im"] = grad_enc.imag
    grad_lpf = grad_latent @ params.w_enc.conj()             # (B, w, cutoff)

    grad_spectrum = np.zeros((batch, w, plan.bins_in), dtype=np.complex128)
    grad_spectrum[:, :, :config.lpf_cutoff] = grad_lpf
    return (grad_spectrum @ dft_matrix(plan.n_hat).conj()).real


# ---------------------------------------------------------------------------
# finite-difference oracle


@dataclass
class GradCheckResult:
    """Worst-case disagreement between analytic and numeric gradients."""

    max_rel_error: float
    worst_param: str
    worst_index: tuple
    per_param: dict[str, float]

    def __float__(self):
        return self.max_rel_error


def grad_check(params: MixLinearParams, x_batch, y_batch, config: ModelConfig,
               step: float = 1e-5, backward_fn=None) -> GradCheckResult:
    """Compare every analytic gradient entry against central differences.

    Relative discrepancy uses max(|analytic|, |numeric|, 1e-8) as the
    denominator.  ``backward_fn`` substitutes the gradient producer under
    test (used by the CLI's deliberate-corruption hook).
    """
    if step <= 0:
        raise ValueError(f"step must be positive, got {step}")
    x2d = _flatten_windows(x_batch, config.lookback, "inputs")
    y2d = _flatten_windows(y_batch, config.horizon, "targets")
    plan = plan_shapes(config)

    def loss_now() -> float:
        pred = forward_batch(x2d, params, config, plan)
        d = pred - y2d
        return float(np.mean(d * d))

    _, grads = (backward_fn or backward)(x_batch, y_batch, params, config)

    worst = 0.0
    worst_param = ""
    worst_index: tuple = ()
    per_param: dict[str, float] = {}
    for name, arr in params.named_arrays():
        analytic = grads[name]
        local_worst = 0.0
        flat = arr.reshape(-1)
        for idx in range(flat.size):
            original = flat[idx]
            flat[idx] = original + step
            plus = loss_now()
            flat[idx] = original - step
            minus = loss_now()
            flat[idx] = original
            numeric = (plus - minus) / (2.0 * step)
            a = float(np.asarray(analytic).reshape(-1)[idx])
            rel = abs(a - numeric) / max(abs(a), abs(numeric), 1e-8)
            if rel > local_worst:
                local_worst = rel
            if rel > worst:
                worst = rel
                worst_param = name
                worst_index = np.unravel_index(idx, arr.shape if arr.shape else (1,))
        per_param[name] = local_worst
    return GradCheckResult(worst, worst_param, worst_index, per_param)
