"""Embedding process I (logo into the DCT of the scrambled image) and
process II (oriented watermark along two rays symmetric about 90 degrees).
"""

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import chaos, skg
from .chaos import ChaosKey
from .errors import BoundsError, CapacityError, ParameterError, WatermarkError
from .imgops import as_gray, dct2, idct2, quantize_pixels, round_half_away, scramble, unscramble
from .skg import BlockGeometry, MainKey

SUBKEY_MU = 3.999999999999999
THETA_RANGE = (5.0, 85.0)
# fixed radial spacing that never maps two consecutive radii onto one pixel
ROBUST_RAY_STEP = math.sqrt(2.0)


@dataclass(frozen=True)
class EmbedConfig:
    """Quantization steps and orientation-template geometry.

    ``theta=None`` derives the ray half-angle from the oriented-watermark key.
    ``ray_step`` is the radial distance between consecutive ray samples; the
    default keeps the bit-to-radius map identical at every angle, which is
    what makes the template survive rotation.
    """

    delta: float = 36.0
    delta_prime: float = 18.0
    theta: float | None = 60.0
    len_ow: int = 150
    ray_step: float = ROBUST_RAY_STEP
    geometry: BlockGeometry = field(default_factory=BlockGeometry)

    def __post_init__(self):
        if self.delta <= 0 or self.delta_prime <= 0:
            raise ParameterError("quantization steps must be positive")
        if self.delta < 1.5 * self.delta_prime:
            raise ParameterError(
                f"delta={self.delta} < 1.5*delta_prime={1.5 * self.delta_prime}: "
                "the spatial template would disturb the logo")
        if self.theta is not None and not (THETA_RANGE[0] < self.theta < THETA_RANGE[1]):
            raise ParameterError(f"theta must lie in {THETA_RANGE}")
        if self.len_ow < 1:
            raise ParameterError("len_ow must be >= 1")
        if self.ray_step < 1.0:
            raise ParameterError("ray_step must be >= 1")


# -- process I -------------------------------------------------------------

def encrypt_watermark(logo, keystream) -> np.ndarray:
    """XOR the row-major logo bits with the first H*W keystream bits."""
    w = np.asarray(logo, dtype=np.uint8).ravel()
    k = np.asarray(keystream, dtype=np.uint8).ravel()
    if k.size < w.size:
        raise WatermarkError(f"keystream has {k.size} bits, logo needs {w.size}")
    return w ^ k[: w.size]


def qim_quantize(c, bit, delta: float):
    """Snap ``c`` onto the lattice of ``bit``: multiples of delta for 0, offset by delta/2 for 1."""
    if delta <= 0:
        raise ParameterError("delta must be positive")
    c = np.asarray(c, dtype=np.float64)
    bit = np.asarray(bit)
    q0 = round_half_away(c / delta) * delta
    q1 = round_half_away((c - 0.5 * delta) / delta) * delta + 0.5 * delta
    out = np.where(bit == 0, q0, q1)
    return out if out.ndim else float(out)


def select_positions(beta, count: int) -> np.ndarray:
    """First ``count`` entries of beta with the DC position (1) removed."""
    beta = np.asarray(beta, dtype=np.int64)
    if count < 0 or count > beta.size - 1:
        raise CapacityError(f"cannot place {count} bits in {beta.size - 1} AC coefficients")
    return beta[beta != 1][:count]


@dataclass(frozen=True)
class CarrierLayout:
    """Everything the transmitter and receiver regenerate from the keys and the image."""

    alpha: np.ndarray       # pixel scrambling permutation (1-based)
    keystream: np.ndarray   # full digitized key2 sequence, first H*W bits used
    beta: np.ndarray        # coefficient-order permutation from the sub key (1-based)
    feature_codes: np.ndarray
    subkey: skg.SubKey


def subkey_sequence(sk: skg.SubKey, length: int) -> np.ndarray:
    key = ChaosKey(SUBKEY_MU, skg.subkey_to_seed(sk))
    return chaos.iterate_logistic(key, chaos.BURN_IN, length)


def carrier_layout(image, key1: MainKey, key2: ChaosKey,
                   geom: BlockGeometry = BlockGeometry()) -> CarrierLayout:
    size = np.asarray(image).size
    x = chaos.iterate_logistic(key2, chaos.BURN_IN, size)
    fc = skg.extract_feature_codes(image, geom)
    sk = skg.derive_subkey(key1, fc)
    beta = chaos.sort_index(subkey_sequence(sk, size))
    return CarrierLayout(chaos.sort_index(x), chaos.digitize(x, 2), beta, fc, sk)


def embed_dct_bits(image, bits, positions, delta: float, alpha=None) -> np.ndarray:
    """QIM-embed ``bits`` at 1-based flat DCT ``positions`` of the (optionally scrambled) image."""
    img = as_gray(image)
    bits = np.asarray(bits, dtype=np.uint8).ravel()
    pos = np.asarray(positions, dtype=np.int64) - 1
    if pos.size != bits.size:
        raise WatermarkError("one position per bit required")
    carrier = img if alpha is None else scramble(img, alpha)
    coefs = dct2(carrier).ravel()
    coefs[pos] = qim_quantize(coefs[pos], bits, delta)
    spatial = idct2(coefs.reshape(img.shape))
    if alpha is not None:
        spatial = unscramble(spatial, alpha)
    return quantize_pixels(spatial)


def embed_logo(image, logo, key1: MainKey, key2: ChaosKey,
               cfg: EmbedConfig = EmbedConfig()) -> np.ndarray:
    """Embedding process I; returns watermarked image I."""
    img = as_gray(image)
    logo = np.asarray(logo, dtype=np.uint8)
    if logo.size < 1:
        raise WatermarkError("empty logo")
    layout = carrier_layout(img, key1, key2, cfg.geometry)
    encrypted = encrypt_watermark(logo, layout.keystream)
    positions = select_positions(layout.beta, logo.size)
    return embed_dct_bits(img, encrypted, positions, cfg.delta, alpha=layout.alpha)


# -- process II ------------------------------------------------------------

def template_center(shape) -> tuple[int, int]:
    M, N = shape
    return M // 2, N // 2


@lru_cache(maxsize=4096)
def _ray_offsets(angle: float, length: int, step: float) -> np.ndarray:
    phi = math.radians(angle)
    s, c = math.sin(phi), math.cos(phi)
    out, r = [], 1
    while len(out) < length:
        p = (int(round_half_away(-r * step * s)), int(round_half_away(r * step * c)))
        r += 1
        if out and p == out[-1]:
            continue
        out.append(p)
    arr = np.array(out, dtype=np.int64)
    arr.setflags(write=False)
    return arr


def ray_offsets(angle: float, length: int, step: float = 1.0) -> np.ndarray:
    """(row, col) offsets from the template center; duplicates skipped by advancing the radius."""
    if length < 1:
        raise ParameterError("ray length must be >= 1")
    return _ray_offsets(float(angle) % 360.0, int(length), float(step))


def trace_ray(M: int, N: int, angle: float, length: int, step: float = 1.0,
              center=None) -> np.ndarray:
    """Pixel positions of a ray leaving the center at ``angle`` degrees.

    Angles are counterclockwise from the +column axis with image-up positive.
    Returns a ``(length, 2)`` array of 0-based (row, col).
    """
    rc, cc = template_center((M, N)) if center is None else center
    pts = ray_offsets(angle, length, step) + np.array([rc, cc])
    if (pts < 0).any() or (pts[:, 0] >= M).any() or (pts[:, 1] >= N).any():
        raise BoundsError(f"ray at {angle} deg, length {length} leaves the {M}x{N} image")
    return pts


def oriented_watermark(key3: ChaosKey, length: int) -> np.ndarray:
    return chaos.sign_sequence(key3, length)


def template_theta(key3: ChaosKey, cfg: EmbedConfig) -> float:
    if cfg.theta is not None:
        return float(cfg.theta)
    z = chaos.iterate_logistic(key3, chaos.BURN_IN, cfg.len_ow + 1)[-1]
    lo, hi = THETA_RANGE
    return lo + (hi - lo) * float(z)


def embed_oriented(image, key3: ChaosKey, cfg: EmbedConfig = EmbedConfig()) -> np.ndarray:
    """Embedding process II; returns watermarked image II."""
    img = as_gray(image)
    M, N = img.shape
    if cfg.len_ow > 0.5 * min(M, N):
        raise ParameterError(f"len_ow={cfg.len_ow} exceeds half the smaller image side")
    bits = (oriented_watermark(key3, cfg.len_ow) < 0).astype(np.uint8)
    theta = template_theta(key3, cfg)
    out = img.astype(np.float64)
    for angle in (90.0 - theta, 90.0 + theta):
        r, c = trace_ray(M, N, angle, cfg.len_ow, cfg.ray_step).T
        q = qim_quantize(out[r, c], bits, cfg.delta_prime)
        # shifting by one step stays on the same-bit sublattice
        q = np.where(q > 255, q - cfg.delta_prime, q)
        q = np.where(q < 0, q + cfg.delta_prime, q)
        out[r, c] = q
    return quantize_pixels(out)


def embed(image, logo, key1: MainKey, key2: ChaosKey, key3: ChaosKey,
          cfg: EmbedConfig = EmbedConfig()) -> np.ndarray:
    """Both processes: logo first, then the orientation template."""
    return embed_oriented(embed_logo(image, logo, key1, key2, cfg), key3, cfg)
