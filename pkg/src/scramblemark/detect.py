"""Blind detection: orientation scan, geometry estimation, rectification and
logo extraction.
"""

from dataclasses import dataclass

import numpy as np

from .chaos import ChaosKey
from .embed import (EmbedConfig, carrier_layout, encrypt_watermark, oriented_watermark,
                    ray_offsets, select_positions, template_center)
from .errors import BoundsError, ParameterError, WatermarkError
from .imgops import as_gray, dct2, rotate, round_half_away, scramble, shift_vector, translate
from .skg import MainKey

DETECTION_THRESHOLD = 0.5
MIN_PEAK_SEPARATION = 10
ANGLES = np.arange(1, 361)


def qim_decode(c, delta: float):
    """Index of the nearer QIM lattice; an exact tie decodes to 0."""
    if delta <= 0:
        raise ParameterError("delta must be positive")
    c = np.asarray(c, dtype=np.float64)
    d0 = np.abs(c - round_half_away(c / delta) * delta)
    d1 = np.abs(c - (round_half_away((c - 0.5 * delta) / delta) * delta + 0.5 * delta))
    out = (d1 < d0).astype(np.uint8)
    return out if out.ndim else int(out)


@dataclass(frozen=True)
class OrientationScan:
    angles: np.ndarray
    cc_values: np.ndarray
    center: tuple[int, int]


@dataclass(frozen=True)
class GeometryEstimate:
    """Result of template detection.

    ``rotation`` is the counterclockwise angle the attacker applied and
    ``translation`` a ``(distance, direction)`` pair in the same angle
    convention. When ``found`` is False the other fields are diagnostic only.
    """

    found: bool
    rotation: float = 0.0
    translation: tuple[float, float] | None = None
    peak_pair: tuple[int, int] | None = None
    confidence: float = -1.0


def _ray_table(length: int, step: float) -> np.ndarray:
    return np.stack([ray_offsets(a, length, step) for a in ANGLES])


def extract_ray(image, angle: float, length: int, delta_prime: float,
                step: float = 1.0, center=None) -> np.ndarray:
    img = as_gray(image)
    M, N = img.shape
    rc, cc = template_center(img.shape) if center is None else center
    pts = ray_offsets(angle, length, step) + np.array([rc, cc])
    if (pts < 0).any() or (pts[:, 0] >= M).any() or (pts[:, 1] >= N).any():
        raise BoundsError(f"ray at {angle} deg leaves the image")
    bits = qim_decode(img[pts[:, 0], pts[:, 1]], delta_prime)
    return (1 - 2 * bits.astype(np.int8)).astype(np.int8)


def scan_orientation(image, ow, delta_prime: float, step: float = 1.0,
                     center=None) -> OrientationScan:
    """CC(0) between the template and the ray decoded at every whole degree 1..360."""
    img = as_gray(image)
    ow = np.asarray(ow, dtype=np.float64)
    M, N = img.shape
    rc, cc = template_center(img.shape) if center is None else center
    table = _ray_table(ow.size, step)
    rows, cols = table[..., 0] + rc, table[..., 1] + cc
    if rows.min() < 0 or cols.min() < 0 or rows.max() >= M or cols.max() >= N:
        raise BoundsError(f"rays of length {ow.size} around {(rc, cc)} leave the image")
    bits = qim_decode(img[rows, cols], delta_prime)
    signs = 1.0 - 2.0 * bits
    return OrientationScan(ANGLES.copy(), signs @ ow / ow.size, (rc, cc))


def _peaks(cc, min_separation):
    left, right = np.roll(cc, 1), np.roll(cc, -1)
    local = np.flatnonzero((cc >= left) & (cc >= right))
    order = local[np.argsort(-cc[local], kind="stable")]
    if order.size == 0:
        return None
    first = order[0]
    for k in order[1:]:
        d = abs(int(k) - int(first))
        if min(d, cc.size - d) >= min_separation:
            return int(first), int(k)
    return None


def rotation_from_peaks(a: float, b: float) -> float:
    """Rotation implied by two peak angles: the midpoint of the shorter arc minus 90,
    normalized into (-180, 180]."""
    a, b = sorted((float(a) % 360.0, float(b) % 360.0))
    mid = (a + b) / 2.0 if b - a <= 180 else (a + b + 360) / 2.0
    r = (mid - 90.0) % 360.0
    return r - 360.0 if r > 180.0 else r


def estimate_rotation(scan: OrientationScan, threshold: float = DETECTION_THRESHOLD,
                      min_separation: int = MIN_PEAK_SEPARATION) -> GeometryEstimate:
    """Rotation from the two strongest, well separated correlation peaks.

    The marked direction is the midpoint of the shorter arc between the
    peaks (the template's opening angle is below 180 degrees); its offset
    from 90 is the rotation.
    """
    cc = np.asarray(scan.cc_values, dtype=np.float64)
    pair = _peaks(cc, min_separation)
    if pair is None:
        return GeometryEstimate(found=False)
    i, j = pair
    a, b = sorted((int(scan.angles[i]), int(scan.angles[j])))
    confidence = float(min(cc[i], cc[j]))
    return GeometryEstimate(found=confidence >= threshold, rotation=rotation_from_peaks(a, b),
                            peak_pair=(a, b), confidence=confidence)


def _candidate_shifts(max_shift, direction, grid_step):
    if direction is not None:
        return [(float(d), float(direction)) for d in range(int(max_shift) + 1)]
    if grid_step is None:
        raise ParameterError("a 2-D translation search needs grid_step")
    out = []
    for dr in range(-max_shift, max_shift + 1, grid_step):
        for dc in range(-max_shift, max_shift + 1, grid_step):
            out.append((float(np.hypot(dr, dc)), float(np.degrees(np.arctan2(-dr, dc)))))
    return out


def estimate_translation(image, ow, direction: float | None, max_shift: int,
                         delta_prime: float, step: float = 1.0,
                         threshold: float = DETECTION_THRESHOLD,
                         grid_step: int | None = None) -> GeometryEstimate:
    """Re-center the orientation scan at each candidate shift and keep the best one.

    With ``direction`` given, the search is 1-D over 0..max_shift pixels along
    it; with ``direction=None`` a coarse 2-D grid of spacing ``grid_step`` is used.
    """
    img = as_gray(image)
    if max_shift < 0 or max_shift >= min(img.shape) / 4:
        raise ParameterError("max_shift must lie in [0, min(M, N)/4)")
    base = template_center(img.shape)
    best = None
    for distance, angle in _candidate_shifts(max_shift, direction, grid_step):
        dr, dc = shift_vector(distance, angle)
        try:
            scan = scan_orientation(img, ow, delta_prime, step, (base[0] + dr, base[1] + dc))
        except BoundsError:
            continue
        est = estimate_rotation(scan, threshold)
        if est.peak_pair is None:
            continue
        if best is None or est.confidence > best.confidence:
            best = GeometryEstimate(est.found, est.rotation, (distance, angle),
                                    est.peak_pair, est.confidence)
    if best is None:
        return GeometryEstimate(found=False)
    return best


def detect(image, key3: ChaosKey, cfg: EmbedConfig = EmbedConfig(), max_shift: int = 0,
           direction: float | None = None, grid_step: int | None = None,
           threshold: float = DETECTION_THRESHOLD):
    """Orientation scan at the image center, plus an optional translation search.

    Returns ``(estimate, scan)`` where ``scan`` is the curve at the chosen center.
    """
    img = as_gray(image)
    ow = oriented_watermark(key3, cfg.len_ow)
    if max_shift > 0:
        est = estimate_translation(img, ow, direction, max_shift, cfg.delta_prime,
                                   cfg.ray_step, threshold, grid_step)
        center = template_center(img.shape)
        if est.translation is not None:
            dr, dc = shift_vector(*est.translation)
            center = (center[0] + dr, center[1] + dc)
        scan = scan_orientation(img, ow, cfg.delta_prime, cfg.ray_step, center)
        return est, scan
    scan = scan_orientation(img, ow, cfg.delta_prime, cfg.ray_step)
    return estimate_rotation(scan, threshold), scan


def rectify(image, estimate: GeometryEstimate) -> np.ndarray:
    """Undo the estimated translation, then the estimated rotation."""
    out = as_gray(image)
    if estimate.translation is not None and estimate.translation[0] != 0:
        distance, direction = estimate.translation
        out = translate(out, distance, direction + 180.0)
    if estimate.rotation:
        out = rotate(out, -estimate.rotation)
    return out


def extract_bits(image, key1: MainKey, key2: ChaosKey, count: int,
                 cfg: EmbedConfig = EmbedConfig()) -> np.ndarray:
    """Decrypted logo bits (flat) recovered blindly from ``image``."""
    img = as_gray(image)
    layout = carrier_layout(img, key1, key2, cfg.geometry)
    coefs = dct2(scramble(img, layout.alpha)).ravel()
    positions = select_positions(layout.beta, count) - 1
    return encrypt_watermark(qim_decode(coefs[positions], cfg.delta), layout.keystream)


def extract_logo(image, key1: MainKey, key2: ChaosKey, cfg: EmbedConfig = EmbedConfig(),
                 logo_dims: tuple[int, int] = (64, 64)) -> np.ndarray:
    H, W = logo_dims
    if H < 1 or W < 1:
        raise WatermarkError("logo dimensions must be positive")
    return extract_bits(image, key1, key2, H * W, cfg).reshape(H, W)
