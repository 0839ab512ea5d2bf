"""Attack simulators for the robustness experiments.

All attacks take and return uint8 rasters of unchanged size. The stochastic
ones are driven by an explicit integer seed.
"""

from dataclasses import asdict, dataclass, field

import numpy as np
from scipy import fft, ndimage

from .errors import ParameterError
from .imgops import as_gray, quantize_pixels, rotate, translate

# ITU-T T.81 Annex K, table K.1 (luminance)
LUMINANCE_TABLE = np.array([
    [16, 11, 10, 16, 24, 40, 51, 61],
    [12, 12, 14, 19, 26, 58, 60, 55],
    [14, 13, 16, 24, 40, 57, 69, 56],
    [14, 17, 22, 29, 51, 87, 80, 62],
    [18, 22, 37, 56, 68, 109, 103, 77],
    [24, 35, 55, 64, 81, 104, 113, 92],
    [49, 64, 78, 87, 103, 121, 120, 101],
    [72, 92, 95, 98, 112, 100, 103, 99],
], dtype=np.float64)


def awgn(image, sigma: float, seed: int = 0) -> np.ndarray:
    if sigma < 0:
        raise ParameterError("sigma must be >= 0")
    img = as_gray(image)
    if sigma == 0:
        return img.copy()
    noise = np.random.default_rng(seed).normal(0.0, sigma, img.shape)
    return quantize_pixels(img + noise)


def quality_table(quality: int) -> np.ndarray:
    if not (1 <= quality <= 100):
        raise ParameterError("quality must lie in 1..100")
    scale = (100 - quality) / 50 if quality >= 50 else 50 / quality
    return np.maximum(1.0, np.floor(LUMINANCE_TABLE * scale + 0.5))


def jpeg_like(image, quality: int) -> np.ndarray:
    """Baseline JPEG's lossy path only: level shift, 8x8 DCT, table quantization and back.

    Edge blocks are padded by replication and cropped afterwards.
    """
    img = as_gray(image)
    table = quality_table(quality)
    M, N = img.shape
    pm, pn = -M % 8, -N % 8
    a = np.pad(img.astype(np.float64), ((0, pm), (0, pn)), mode="edge") - 128.0
    blocks = a.reshape(a.shape[0] // 8, 8, a.shape[1] // 8, 8).swapaxes(1, 2)
    coefs = fft.dctn(blocks, type=2, norm="ortho", axes=(2, 3))
    coefs = np.round(coefs / table) * table
    back = fft.idctn(coefs, type=2, norm="ortho", axes=(2, 3))
    back = back.swapaxes(1, 2).reshape(a.shape)[:M, :N] + 128.0
    return quantize_pixels(back)


def mean_filter3(image) -> np.ndarray:
    img = as_gray(image)
    return quantize_pixels(ndimage.uniform_filter(img.astype(np.float64), size=3, mode="nearest"))


def gaussian_kernel(size: int = 3, sigma: float = 0.5) -> np.ndarray:
    r = np.arange(size) - (size - 1) / 2
    g = np.exp(-(r ** 2) / (2 * sigma ** 2))
    k = np.outer(g, g)
    return k / k.sum()


def gaussian_lowpass(image, size: int = 3, sigma: float = 0.5) -> np.ndarray:
    img = as_gray(image)
    k = gaussian_kernel(size, sigma)
    return quantize_pixels(ndimage.convolve(img.astype(np.float64), k, mode="nearest"))


def rotate_attack(image, angle: float) -> np.ndarray:
    return rotate(as_gray(image), angle)


def translate_attack(image, distance: float, direction: float) -> np.ndarray:
    """Shift by ``distance`` pixels toward ``direction`` degrees (ccw, image-up);
    "30 degrees clockwise" is ``direction=-30``."""
    img = as_gray(image)
    if distance < 0 or distance >= min(img.shape):
        raise ParameterError("distance must lie in [0, min(M, N))")
    return translate(img, distance, direction)


def crop_attack(image, fraction: float) -> np.ndarray:
    """Zero the top-left rectangle covering ``fraction`` of the area (same aspect ratio)."""
    if not (0.0 < fraction < 1.0):
        raise ParameterError("fraction must lie in (0, 1)")
    img = as_gray(image).copy()
    M, N = img.shape
    side = np.sqrt(fraction)
    h, w = max(1, int(round(M * side))), max(1, int(round(N * side)))
    img[:h, :w] = 0
    return img


@dataclass(frozen=True)
class AttackSpec:
    """A named attack with its parameters, e.g. ``AttackSpec("awgn", {"sigma": 5}, seed=7)``."""

    kind: str
    params: dict = field(default_factory=dict)
    seed: int = 0

    def apply(self, image) -> np.ndarray:
        p = self.params
        if self.kind == "none":
            return as_gray(image).copy()
        if self.kind == "awgn":
            return awgn(image, p["sigma"], self.seed)
        if self.kind == "jpeg_like":
            return jpeg_like(image, int(p["quality"]))
        if self.kind == "mean3":
            return mean_filter3(image)
        if self.kind == "gauss_lp":
            return gaussian_lowpass(image, p.get("size", 3), p.get("sigma", 0.5))
        if self.kind == "rotate":
            return rotate_attack(image, p["angle"])
        if self.kind == "translate":
            return translate_attack(image, p["distance"], p["direction"])
        if self.kind == "crop":
            return crop_attack(image, p["fraction"])
        raise ParameterError(f"unknown attack kind {self.kind!r}")

    def label(self) -> str:
        args = ",".join(f"{k}={v}" for k, v in sorted(self.params.items()))
        return f"{self.kind}({args})" if args else self.kind

    def to_dict(self) -> dict:
        return asdict(self)
