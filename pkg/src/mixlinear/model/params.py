"""Learnable state: initialization, counting, and checkpoint I/O.

Complex weights are stored as separate real/imaginary float64 arrays so
the whole parameter set is a flat collection of real arrays; the forward
pass assembles complex matrices on the fly.
"""

import json
from dataclasses import dataclass, fields, replace
from pathlib import Path

import numpy as np

from ..errors import CheckpointError, ConfigError
from .config import Mode, ModelConfig, ShapePlan, check_spectral_bounds, plan_shapes

CHECKPOINT_MAGIC = b"MIXLINEAR-CHECKPOINT"
CHECKPOINT_VERSION = 1

# Fixed order of the named parameter arrays (also the checkpoint layout).
PARAM_NAMES = (
    "conv_kernel",
    "conv_bias",
    "w_intra",
    "b_intra",
    "w_inter",
    "b_inter",
    "w_enc_re",
    "w_enc_im",
    "w_dec_re",
    "w_dec_im",
    "w_point",
)


@dataclass
class MixLinearParams:
    """Every learned array, keyed by fixed names.

    conv_kernel/conv_bias: period-wide aggregation filter (all modes).
    w_intra/b_intra, w_inter/b_inter: the two segment maps (time branch).
    w_enc_*/w_dec_*: complex spectral compressor/reconstructor components
        (frequency branch; no biases).
    w_point: single pointwise trend map (sparse baseline only).
    """

    mode: Mode
    conv_kernel: np.ndarray
    conv_bias: np.ndarray
    w_intra: np.ndarray | None = None
    b_intra: np.ndarray | None = None
    w_inter: np.ndarray | None = None
    b_inter: np.ndarray | None = None
    w_enc_re: np.ndarray | None = None
    w_enc_im: np.ndarray | None = None
    w_dec_re: np.ndarray | None = None
    w_dec_im: np.ndarray | None = None
    w_point: np.ndarray | None = None

    def named_arrays(self) -> list[tuple[str, np.ndarray]]:
        """Present (name, array) pairs in fixed declaration order."""
        return [(n, getattr(self, n)) for n in PARAM_NAMES if getattr(self, n) is not None]

    def copy(self) -> "MixLinearParams":
        return replace(
            self,
            **{name: arr.copy() for name, arr in self.named_arrays()},
        )

    @property
    def w_enc(self) -> np.ndarray:
        return self.w_enc_re + 1j * self.w_enc_im

    @property
    def w_dec(self) -> np.ndarray:
        return self.w_dec_re + 1j * self.w_dec_im

    def scalar_count(self) -> int:
        return sum(arr.size for _, arr in self.named_arrays())


def init_params(config: ModelConfig, seed: int) -> MixLinearParams:
    """Draw a fresh parameter set, deterministic in ``seed``.

    Weights (and each complex component) are uniform on +/- 1/sqrt(fan_in);
    biases start at zero.  The draw order is fixed, and the branch weights
    are drawn for every mix-family mode so that Mix/TimeOnly/FreqOnly runs
    with the same seed share identical values for the parts they share.
    """
    plan = plan_shapes(config)
    check_spectral_bounds(config, plan)
    rng = np.random.default_rng(seed)

    def uniform(shape, fan_in):
        bound = 1.0 / np.sqrt(fan_in)
        return rng.uniform(-bound, bound, size=shape)

    kernel = uniform(config.period, config.period)
    params = MixLinearParams(
        mode=config.mode,
        conv_kernel=kernel,
        conv_bias=np.zeros(()),
    )
    if config.mode is Mode.SPARSE_BASELINE:
        params.w_point = uniform((plan.m, plan.n), plan.n)
        return params

    w_intra = uniform((plan.seg_out, plan.seg_in), plan.seg_in)
    w_inter = uniform((plan.seg_out, plan.seg_in), plan.seg_in)
    w_enc_re = uniform((config.latent_width, config.lpf_cutoff), config.lpf_cutoff)
    w_enc_im = uniform((config.latent_width, config.lpf_cutoff), config.lpf_cutoff)
    w_dec_re = uniform((plan.bins_out, config.latent_width), config.latent_width)
    w_dec_im = uniform((plan.bins_out, config.latent_width), config.latent_width)
    if config.has_time_branch:
        params.w_intra = w_intra
        params.b_intra = np.zeros(plan.seg_out)
        params.w_inter = w_inter
        params.b_inter = np.zeros(plan.seg_out)
    if config.has_freq_branch:
        params.w_enc_re = w_enc_re
        params.w_enc_im = w_enc_im
        params.w_dec_re = w_dec_re
        params.w_dec_im = w_dec_im
    return params


def param_count(config: ModelConfig) -> int:
    """Exact number of learned scalars (complex entries count twice)."""
    plan = plan_shapes(config)
    count = config.period + 1  # conv kernel + bias
    if config.mode is Mode.SPARSE_BASELINE:
        return count + plan.n * plan.m
    if config.has_time_branch:
        count += 2 * (plan.seg_in * plan.seg_out + plan.seg_out)
    if config.has_freq_branch:
        count += 2 * (config.latent_width * config.lpf_cutoff)
        count += 2 * (plan.bins_out * config.latent_width)
    return count


# ---------------------------------------------------------------------------
# checkpoint format: one magic line, one JSON header line, then the raw
# float64 little-endian array payloads concatenated in header order.


def _config_to_dict(config: ModelConfig) -> dict:
    return {
        "lookback": config.lookback,
        "horizon": config.horizon,
        "period": config.period,
        "lpf_cutoff": config.lpf_cutoff,
        "latent_width": config.latent_width,
        "mode": config.mode.value,
    }


def _config_from_dict(data: dict) -> ModelConfig:
    try:
        return ModelConfig(
            lookback=int(data["lookback"]),
            horizon=int(data["horizon"]),
            period=int(data["period"]),
            lpf_cutoff=int(data["lpf_cutoff"]),
            latent_width=int(data["latent_width"]),
            mode=Mode.parse(data["mode"]),
        )
    except (KeyError, TypeError, ValueError, ConfigError) as exc:
        raise CheckpointError(f"invalid config block in checkpoint: {exc}") from exc


def save_checkpoint(path, config: ModelConfig, params: MixLinearParams) -> None:
    """Write config, shape plan, and parameter arrays to ``path``.

    The file is byte-deterministic for identical inputs: a sorted compact
    JSON header followed by raw ``<f8`` payloads.
    """
    plan = plan_shapes(config)
    arrays = params.named_arrays()
    entries = []
    offset = 0
    for name, arr in arrays:
        nbytes = arr.size * 8
        entries.append(
            {
                "name": name,
                "shape": list(arr.shape),
                "dtype": "<f8",
                "offset": offset,
            }
        )
        offset += nbytes
    header = {
        "format_version": CHECKPOINT_VERSION,
        "config": _config_to_dict(config),
        "plan": {f.name: getattr(plan, f.name) for f in fields(plan)},
        "arrays": entries,
    }
    blob = b"".join(
        np.ascontiguousarray(arr, dtype="<f8").tobytes() for _, arr in arrays
    )
    payload = (
        CHECKPOINT_MAGIC
        + b"\n"
        + json.dumps(header, sort_keys=True, separators=(",", ":")).encode()
        + b"\n"
        + blob
    )
    Path(path).write_bytes(payload)


def load_checkpoint(path) -> tuple[ModelConfig, ShapePlan, MixLinearParams]:
    data = Path(path).read_bytes()
    magic_end = data.find(b"\n")
    if magic_end < 0 or data[:magic_end] != CHECKPOINT_MAGIC:
        raise CheckpointError(f"{path}: not a MixLinear checkpoint")
    header_end = data.find(b"\n", magic_end + 1)
    if header_end < 0:
        raise CheckpointError(f"{path}: truncated checkpoint header")
    try:
        header = json.loads(data[magic_end + 1:header_end])
    except json.JSONDecodeError as exc:
        raise CheckpointError(f"{path}: bad checkpoint header: {exc}") from exc
    if header.get("format_version") != CHECKPOINT_VERSION:
        raise CheckpointError(
            f"{path}: unsupported format version {header.get('format_version')}"
        )
    config = _config_from_dict(header.get("config", {}))
    plan = plan_shapes(config)
    blob = data[header_end + 1:]
    params = MixLinearParams(
        mode=config.mode,
        conv_kernel=np.zeros(config.period),
        conv_bias=np.zeros(()),
    )
    for entry in header.get("arrays", []):
        name = entry.get("name")
        if name not in PARAM_NAMES:
            raise CheckpointError(f"{path}: unknown parameter {name!r}")
        shape = tuple(entry.get("shape", []))
        count = int(np.prod(shape)) if shape else 1
        offset = int(entry.get("offset", -1))
        if offset < 0 or offset + count * 8 > len(blob):
            raise CheckpointError(f"{path}: array {name!r} overruns payload")
        arr = np.frombuffer(blob, dtype="<f8", count=count, offset=offset)
        setattr(params, name, arr.reshape(shape).astype(np.float64))
    _check_shapes(config, plan, params, path)
    return config, plan, params


def _check_shapes(config, plan, params, path) -> None:
    expected = {
        "conv_kernel": (config.period,),
        "conv_bias": (),
    }
    if config.mode is Mode.SPARSE_BASELINE:
        expected["w_point"] = (plan.m, plan.n)
    else:
        if config.has_time_branch:
            expected["w_intra"] = (plan.seg_out, plan.seg_in)
            expected["b_intra"] = (plan.seg_out,)
            expected["w_inter"] = (plan.seg_out, plan.seg_in)
            expected["b_inter"] = (plan.seg_out,)
        if config.has_freq_branch:
            latent = config.latent_width
            expected["w_enc_re"] = (latent, config.lpf_cutoff)
            expected["w_enc_im"] = (latent, config.lpf_cutoff)
            expected["w_dec_re"] = (plan.bins_out, latent)
            expected["w_dec_im"] = (plan.bins_out, latent)
    for name, shape in expected.items():
        arr = getattr(params, name)
        if arr is None or arr.shape != shape:
            got = None if arr is None else arr.shape
            raise CheckpointError(
                f"{path}: parameter {name!r} has shape {got}, expected {shape}"
            )
