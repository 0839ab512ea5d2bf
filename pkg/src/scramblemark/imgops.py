"""Grayscale rasters, permutation scrambling and the full-frame orthonormal DCT.

Images are plain 2-D ``numpy.uint8`` arrays. Flattening is row-major and
permutation indices are 1-based, so pixel ``j`` of an M x N image is
``image.ravel()[j - 1]``.
"""

import numpy as np
from scipy import fft, ndimage

from .errors import GeometryError, UndefinedMetricError, WatermarkError


def as_gray(image) -> np.ndarray:
    """Validate and return ``image`` as a 2-D uint8 array (no rescaling)."""
    a = np.asarray(image)
    if a.ndim != 2 or a.shape[0] < 1 or a.shape[1] < 1:
        raise GeometryError(f"expected a 2-D grayscale raster, got shape {a.shape}")
    if a.dtype == np.uint8:
        return a
    if a.dtype == bool:
        return a.astype(np.uint8)
    if np.issubdtype(a.dtype, np.floating) and not np.all(a == np.round(a)):
        raise WatermarkError("grayscale pixels must be integers; use quantize_pixels")
    if a.min() < 0 or a.max() > 255:
        raise WatermarkError("grayscale pixels must lie in [0, 255]")
    return a.astype(np.uint8)


def _check_perm(alpha, size):
    alpha = np.asarray(alpha, dtype=np.int64)
    if alpha.ndim != 1 or alpha.size != size:
        raise WatermarkError(f"permutation length {alpha.size} != pixel count {size}")
    return alpha - 1


def scramble(image, alpha) -> np.ndarray:
    """``SI_j = OI_{alpha_j}`` over the row-major pixel order; shape and dtype kept."""
    a = np.asarray(image)
    idx = _check_perm(alpha, a.size)
    return a.ravel()[idx].reshape(a.shape)


def unscramble(image, alpha) -> np.ndarray:
    """Inverse of :func:`scramble`: ``OI_{alpha_j} = SI_j``."""
    a = np.asarray(image)
    idx = _check_perm(alpha, a.size)
    out = np.empty(a.size, dtype=a.dtype)
    out[idx] = a.ravel()
    return out.reshape(a.shape)


def dct2(x) -> np.ndarray:
    """Separable orthonormal DCT-II over the whole frame; ``[0, 0]`` is DC."""
    a = np.asarray(x, dtype=np.float64)
    if a.size == 0:
        raise GeometryError("empty input")
    return fft.dctn(a, type=2, norm="ortho")


def idct2(coefs) -> np.ndarray:
    """Exact inverse of :func:`dct2`. The result is real and not yet quantized."""
    return fft.idctn(np.asarray(coefs, dtype=np.float64), type=2, norm="ortho")


def round_half_away(x):
    x = np.asarray(x, dtype=np.float64)
    return np.sign(x) * np.floor(np.abs(x) + 0.5)


def quantize_pixels(matrix) -> np.ndarray:
    """Round half away from zero, then clamp into [0, 255]."""
    a = np.asarray(matrix, dtype=np.float64)
    if a.ndim != 2 or a.size == 0:
        raise GeometryError(f"expected a nonempty 2-D matrix, got shape {a.shape}")
    return np.clip(round_half_away(a), 0, 255).astype(np.uint8)


def energy_ratio(coefs, corner: int) -> float:
    """AC energy in the top-left ``corner x corner`` block over total AC energy."""
    c = np.asarray(coefs, dtype=np.float64)
    if corner < 1 or corner > min(c.shape):
        raise GeometryError(f"corner {corner} outside 1..{min(c.shape)}")
    e = c * c
    dc = e[0, 0]
    total = e.sum() - dc
    if total <= 0.0:
        raise UndefinedMetricError("no AC energy: ratio undefined")
    return float((e[:corner, :corner].sum() - dc) / total)


def rotate(image, angle: float, center=None) -> np.ndarray:
    """Rotate counterclockwise by ``angle`` degrees about ``center`` (default: the
    orientation-template center), bilinear, zero fill, same size."""
    a = np.asarray(image, dtype=np.float64)
    M, N = a.shape
    rc, cc = (M // 2, N // 2) if center is None else center
    if float(angle) % 360.0 == 0.0:
        return quantize_pixels(a)
    t = np.deg2rad(angle)
    rows, cols = np.mgrid[0:M, 0:N].astype(np.float64)
    x, y = cols - cc, rc - rows
    # sample the source at the inverse-rotated location
    xs = np.cos(t) * x + np.sin(t) * y
    ys = -np.sin(t) * x + np.cos(t) * y
    out = ndimage.map_coordinates(a, [rc - ys, cc + xs], order=1, mode="constant", cval=0.0)
    return quantize_pixels(out)


def shift_vector(distance: float, direction: float) -> tuple[int, int]:
    """Integer (row, col) displacement for ``distance`` pixels at ``direction`` degrees
    (counterclockwise from +col, image-up positive)."""
    t = np.deg2rad(direction)
    return (int(round_half_away(-distance * np.sin(t))),
            int(round_half_away(distance * np.cos(t))))


def translate(image, distance: float, direction: float) -> np.ndarray:
    """Integer shift with the vacated region zero filled."""
    a = np.asarray(image)
    dr, dc = shift_vector(distance, direction)
    M, N = a.shape
    out = np.zeros_like(a)
    if abs(dr) >= M or abs(dc) >= N:
        return out
    out[max(dr, 0):M + min(dr, 0), max(dc, 0):N + min(dc, 0)] = \
        a[max(-dr, 0):M + min(-dr, 0), max(-dc, 0):N + min(-dc, 0)]
    return out
