"""Fidelity and accuracy metrics, plus the key-space and guessing-probability calculators."""

import math

import numpy as np
from scipy import ndimage
from scipy.special import gammaln

from .errors import GeometryError, ParameterError, UndefinedMetricError, WatermarkError

LOG10_KEY_PRECISION = 15        # distinct x0 values ~ 1e15 for doubles in [0, 1]
MU_SPAN_VALUES = 4.3e14         # distinct mu values in [3.57, 4]


def _pair(a, b):
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise GeometryError(f"shape mismatch {a.shape} vs {b.shape}")
    return a, b


def psnr(a, b) -> float:
    """PSNR in dB for 8-bit data; ``inf`` when the images are identical."""
    a, b = _pair(a, b)
    mse = np.mean((a - b) ** 2)
    if mse == 0:
        return math.inf
    return float(10.0 * np.log10(255.0 ** 2 / mse))


def ssim(a, b, window: int = 11, sigma: float = 1.5, global_window: bool = False) -> float:
    """Mean SSIM with a Gaussian window (K1=0.01, K2=0.03, L=255, C3=C2/2).

    With the exponents all equal to 1 and C3 = C2/2 the three-factor product
    collapses to the familiar two-factor form. ``global_window=True`` computes
    one SSIM over the whole frame instead.
    """
    a, b = _pair(a, b)
    c1, c2 = (0.01 * 255) ** 2, (0.03 * 255) ** 2
    if global_window:
        mx, my = a.mean(), b.mean()
        vx, vy = a.var(), b.var()
        cov = ((a - mx) * (b - my)).mean()
    else:
        if min(a.shape) < window:
            raise GeometryError(f"image smaller than the {window}x{window} window")
        radius = (window - 1) // 2
        blur = lambda x: ndimage.gaussian_filter(x, sigma, truncate=radius / sigma)
        mx, my = blur(a), blur(b)
        vx = blur(a * a) - mx * mx
        vy = blur(b * b) - my * my
        cov = blur(a * b) - mx * my
    s = ((2 * mx * my + c1) * (2 * cov + c2)) / ((mx * mx + my * my + c1) * (vx + vy + c2))
    if global_window:
        return float(s)
    # drop the border where the window hangs off the image
    r = (window - 1) // 2
    return float(np.mean(s[r:-r or None, r:-r or None]))


def _bits(w, w2):
    w = np.asarray(w, dtype=np.float64).ravel()
    w2 = np.asarray(w2, dtype=np.float64).ravel()
    if w.size != w2.size:
        raise WatermarkError(f"length mismatch {w.size} vs {w2.size}")
    if w.size == 0:
        raise WatermarkError("empty bit sequence")
    return w, w2


def nc(w, w2) -> float:
    w, w2 = _bits(w, w2)
    denom = math.sqrt(float(np.sum(w * w)) * float(np.sum(w2 * w2)))
    if denom == 0:
        raise UndefinedMetricError("NC undefined for an all-zero watermark")
    return float(np.sum(w * w2) / denom)


def ber(w, w2) -> float:
    w, w2 = _bits(w, w2)
    return float(np.mean(w != w2))


def key_space_bits(key1_len: int) -> float:
    """log2 of the joint key space: main key plus two (mu, x0) chaos keys."""
    if key1_len not in (128, 256, 512):
        raise ParameterError("main key length must be 128, 256 or 512")
    per_chaos_key = LOG10_KEY_PRECISION * math.log2(10) + math.log2(MU_SPAN_VALUES)
    return key1_len + 2 * per_chaos_key


def p_success_guess(total_positions: int, embed_count: int) -> float:
    """log10 of 1 / (C(total, count) * count!): guessing both the positions and their order."""
    if not (0 <= embed_count <= total_positions):
        raise ParameterError("need 0 <= embed_count <= total_positions")
    # C(n, k) * k! = n! / (n - k)!
    ln = gammaln(total_positions + 1) - gammaln(total_positions - embed_count + 1)
    return float(-ln / math.log(10))


def p_success_positions(num: int) -> float:
    """Probability that ``num`` differing pixels reveal an embedding position."""
    if num < 0:
        raise ParameterError("num must be >= 0")
    return 1.0 - 0.5 ** num
