"""Real/complex linear primitives and the real-input DFT pair.

Every arithmetic operation the model graph needs lives here: the
half-spectrum DFT/inverse-DFT, real and complex affine maps, and the
length-preserving 1-D convolution.  All public functions are pure,
operate on float64 / complex128 numpy arrays, and validate their inputs
(shape agreement, finiteness).  The ``*_batch`` variants skip per-call
validation and run the same arithmetic over leading batch axes; they are
what the forward/backward engine uses.

The DFT pair is evaluated as a product with a precomputed coefficient
matrix.  Transform lengths in this model are tiny (a few dozen bins), so
the direct O(N^2) matrix form is both the fastest practical choice once
BLAS-batched and the one whose multiply count is exactly auditable for
cost reporting.
"""

from functools import lru_cache

import numpy as np


# ---------------------------------------------------------------------------
# validation helpers


def as_real_vector(x, name: str = "x") -> np.ndarray:
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be 1-D, got shape {arr.shape}")
    if arr.size == 0:
        raise ValueError(f"{name} must be non-empty")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite entries")
    return arr


def as_complex_vector(x, name: str = "x") -> np.ndarray:
    arr = np.asarray(x, dtype=np.complex128)
    if arr.ndim != 1:
        raise ValueError(f"{name} must be 1-D, got shape {arr.shape}")
    if arr.size == 0:
        raise ValueError(f"{name} must be non-empty")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite entries")
    return arr


def as_real_matrix(x, name: str = "W") -> np.ndarray:
    arr = np.asarray(x, dtype=np.float64)
    if arr.ndim != 2:
        raise ValueError(f"{name} must be 2-D, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite entries")
    return arr


def as_complex_matrix(x, name: str = "W") -> np.ndarray:
    arr = np.asarray(x, dtype=np.complex128)
    if arr.ndim != 2:
        raise ValueError(f"{name} must be 2-D, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite entries")
    return arr


# ---------------------------------------------------------------------------
# DFT pair (half spectrum: a real length-N signal is fully determined by its
# floor(N/2)+1 non-negative-frequency bins)


def spectrum_bins(n: int) -> int:
    """Number of half-spectrum bins for a real signal of length ``n``."""
    return n // 2 + 1


@lru_cache(maxsize=64)
def dft_matrix(n: int) -> np.ndarray:
    """Forward coefficient matrix F with F[k, t] = exp(-2j*pi*k*t/n).

    Shape (bins, n); ``rfft(x) == F @ x``.
    """
    k = np.arange(spectrum_bins(n), dtype=np.float64)[:, None]
    t = np.arange(n, dtype=np.float64)[None, :]
    f = np.exp((-2j * np.pi / n) * (k * t))
    f.setflags(write=False)
    return f


@lru_cache(maxsize=64)
def idft_matrix(n: int) -> np.ndarray:
    """Inverse coefficient matrix G for the half-spectrum representation.

    G[t, k] = (c_k / n) * exp(+2j*pi*k*t/n) where c_k doubles every bin
    that has a Hermitian partner (i.e. all but DC, and Nyquist for even
    n).  ``irfft(X, n) == real(G @ X)``.
    """
    bins = spectrum_bins(n)
    weights = np.full(bins, 2.0)
    weights[0] = 1.0
    if n % 2 == 0:
        weights[-1] = 1.0
    t = np.arange(n, dtype=np.float64)[:, None]
    k = np.arange(bins, dtype=np.float64)[None, :]
    g = (weights / n) * np.exp((2j * np.pi / n) * (k * t))
    g.setflags(write=False)
    return g


def rfft(x) -> np.ndarray:
    """Half spectrum of a real signal: bin k = sum_t x[t]*exp(-2j*pi*k*t/N).

    Returns floor(N/2)+1 complex bins; the remaining bins of the full DFT
    are redundant by Hermitian symmetry.
    """
    arr = as_real_vector(x)
    return dft_matrix(arr.size) @ arr


def irfft(x, n: int) -> np.ndarray:
    """Real signal of length ``n`` from its half spectrum.

    Returns the real part of (1/n) * sum_k Xext[k]*exp(2j*pi*k*t/n) where
    Xext is ``x`` extended by Hermitian symmetry; inverse of :func:`rfft`
    up to round-off.
    """
    arr = as_complex_vector(x, "spectrum")
    if n < 1:
        raise ValueError(f"target length must be >= 1, got {n}")
    if arr.size != spectrum_bins(n):
        raise ValueError(
            f"spectrum length {arr.size} does not match target length {n} "
            f"(expected {spectrum_bins(n)} bins)"
        )
    return (idft_matrix(n) @ arr).real


def rfft_batch(rows: np.ndarray) -> np.ndarray:
    """rfft over the last axis of a real array; no validation."""
    return rows @ dft_matrix(rows.shape[-1]).T


def irfft_batch(spectra: np.ndarray, n: int) -> np.ndarray:
    """irfft over the last axis of a complex array; no validation."""
    return (spectra @ idft_matrix(n).T).real


# ---------------------------------------------------------------------------
# affine maps


def real_affine(w, x, b) -> np.ndarray:
    """out = W @ x + b for real W (r x c), x (c,), b (r,)."""
    wm = as_real_matrix(w)
    xv = as_real_vector(x)
    bv = as_real_vector(b, "b")
    if wm.shape[1] != xv.size:
        raise ValueError(f"W has {wm.shape[1]} columns but x has length {xv.size}")
    if wm.shape[0] != bv.size:
        raise ValueError(f"W has {wm.shape[0]} rows but b has length {bv.size}")
    return wm @ xv + bv


def complex_affine(w, z, b=None) -> np.ndarray:
    """out = W @ z (+ b) with complex multiplication semantics."""
    wm = as_complex_matrix(w)
    zv = as_complex_vector(z, "z")
    if wm.shape[1] != zv.size:
        raise ValueError(f"W has {wm.shape[1]} columns but z has length {zv.size}")
    out = wm @ zv
    if b is not None:
        bv = as_complex_vector(b, "b")
        if bv.size != wm.shape[0]:
            raise ValueError(f"W has {wm.shape[0]} rows but b has length {bv.size}")
        out = out + bv
    return out


# ---------------------------------------------------------------------------
# length-preserving convolution


def conv_pad_split(width: int) -> tuple[int, int]:
    """(left, right) zero padding so a width-``width`` kernel preserves length."""
    left = (width - 1) // 2
    return left, width - 1 - left


def conv1d_same(x, kernel, bias: float = 0.0) -> np.ndarray:
    """Length-preserving cross-correlation with zero padding.

    Pads floor((w-1)/2) zeros in front and ceil((w-1)/2) behind, then
    out[t] = bias + sum_i kernel[i] * padded[t+i].  The kernel is not
    flipped (deep-learning convention).
    """
    xv = as_real_vector(x)
    kv = as_real_vector(kernel, "kernel")
    if kv.size > xv.size:
        raise ValueError(f"kernel width {kv.size} exceeds input length {xv.size}")
    if not np.isfinite(bias):
        raise ValueError("bias must be finite")
    return conv1d_same_batch(xv[None, :], kv, float(bias))[0]


def conv1d_same_batch(rows: np.ndarray, kernel: np.ndarray, bias: float) -> np.ndarray:
    """conv1d_same over the last axis of (B, L) rows; no validation."""
    b, length = rows.shape
    width = kernel.size
    left, right = conv_pad_split(width)
    padded = np.zeros((b, length + left + right))
    padded[:, left:left + length] = rows
    out = np.full((b, length), bias)
    for i in range(width):
        out += kernel[i] * padded[:, i:i + length]
    return out
