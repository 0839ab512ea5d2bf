"""Experiment grids: fidelity, feature-code robustness, frequency-region
equivalence, robustness of the extracted logo and key sensitivity.

Every function returns a list of flat dict rows so results can be written
straight to CSV. PSNR of an attacked image is measured against the original,
unwatermarked image, so it includes the watermark's own distortion.
"""

import csv
from dataclasses import dataclass

import numpy as np

from . import chaos, metrics, skg
from .attacks import AttackSpec, jpeg_like
from .chaos import ChaosKey
from .detect import detect, extract_logo, qim_decode, rectify
from .embed import (EmbedConfig, embed_dct_bits, embed_logo, embed_oriented,
                    encrypt_watermark)
from .imgops import dct2, energy_ratio, scramble
from .skg import MainKey

# main key and template key used throughout the reference experiments
DEFAULT_KEY1 = MainKey("bae63457983b9e7d052f5867dee30024")
DEFAULT_KEY2 = ChaosKey(3.99, 0.123456789)
DEFAULT_KEY3 = ChaosKey(3.97986502162631, 0.64246416698522)

# 64x64 regions of the 512x512 coefficient matrix, 1-based inclusive corners
REGIONS = {"LF": (11, 74), "IF": (221, 284), "HF": (431, 494)}

FC_ATTACKS = (
    [AttackSpec("awgn", {"sigma": s}, seed=7) for s in (1, 2, 5, 10, 16, 20)]
    + [AttackSpec("jpeg_like", {"quality": q}) for q in (100, 90, 80, 50, 20, 10)]
    + [AttackSpec("mean3"), AttackSpec("gauss_lp"), AttackSpec("crop", {"fraction": 0.25}),
       AttackSpec("translate", {"distance": 40, "direction": -30}),
       AttackSpec("rotate", {"angle": 8})]
)

ROBUSTNESS_ATTACKS = (
    [AttackSpec("awgn", {"sigma": s}, seed=7) for s in (1, 2, 5, 8)]
    + [AttackSpec("jpeg_like", {"quality": q}) for q in (100, 95, 90, 80, 75)]
    + [AttackSpec("mean3"), AttackSpec("gauss_lp")]
)


@dataclass(frozen=True)
class Keys:
    key1: MainKey = DEFAULT_KEY1
    key2: ChaosKey = DEFAULT_KEY2
    key3: ChaosKey = DEFAULT_KEY3


def watermark(image, logo, keys: Keys = Keys(), cfg: EmbedConfig = EmbedConfig()):
    """Return (image I, image II)."""
    first = embed_logo(image, logo, keys.key1, keys.key2, cfg)
    return first, embed_oriented(first, keys.key3, cfg)


def _resync(attacked, spec: AttackSpec, keys: Keys, cfg: EmbedConfig):
    """Geometric attacks go through template detection and rectification first."""
    if spec.kind == "rotate":
        est, _ = detect(attacked, keys.key3, cfg)
        return rectify(attacked, est), est
    if spec.kind == "translate":
        est, _ = detect(attacked, keys.key3, cfg, max_shift=min(attacked.shape) // 4 - 1,
                        direction=spec.params["direction"])
        return rectify(attacked, est), est
    return attacked, None


def fidelity_table(images: dict, logo, keys: Keys = Keys(), cfg: EmbedConfig = EmbedConfig()):
    rows = []
    for name, img in images.items():
        first, second = watermark(img, logo, keys, cfg)
        rows.append({
            "image": name,
            "psnr_I": metrics.psnr(img, first), "ssim_I": metrics.ssim(img, first),
            "psnr_II": metrics.psnr(img, second), "ssim_II": metrics.ssim(img, second),
            "fc_sync": bool(np.array_equal(skg.extract_feature_codes(img, cfg.geometry),
                                           skg.extract_feature_codes(second, cfg.geometry))),
        })
    return rows


def feature_code_table(image, logo, attacks=FC_ATTACKS, keys: Keys = Keys(),
                       cfg: EmbedConfig = EmbedConfig(), name: str = "image"):
    """FC synchronization of the attacked (and, if geometric, rectified) watermarked image."""
    _, marked = watermark(image, logo, keys, cfg)
    reference = skg.extract_feature_codes(image, cfg.geometry)
    rows = []
    for spec in attacks:
        attacked = spec.apply(marked)
        received, _ = _resync(attacked, spec, keys, cfg)
        fc = skg.extract_feature_codes(received, cfg.geometry)
        rows.append({"image": name, "attack": spec.label(),
                     "psnr_vs_original": metrics.psnr(image, attacked),
                     "fc_bits_changed": int(np.sum(fc != reference)),
                     "fc_sync": bool(np.array_equal(fc, reference))})
    return rows


def robustness_table(image, logo, attacks=ROBUSTNESS_ATTACKS, keys: Keys = Keys(),
                     cfg: EmbedConfig = EmbedConfig(), name: str = "image"):
    _, marked = watermark(image, logo, keys, cfg)
    rows = []
    for spec in attacks:
        attacked = spec.apply(marked)
        received, est = _resync(attacked, spec, keys, cfg)
        got = extract_logo(received, keys.key1, keys.key2, cfg, logo.shape)
        row = {"image": name, "attack": spec.label(),
               "psnr_vs_original": metrics.psnr(image, attacked),
               "ber": metrics.ber(logo, got), "nc": metrics.nc(logo, got)}
        if est is not None:
            row["rotation_estimate"] = est.rotation
            row["detect_confidence"] = est.confidence
        rows.append(row)
    return rows


def energy_table(images: dict, key2: ChaosKey = DEFAULT_KEY2, corner: int = 128):
    rows = []
    for name, img in images.items():
        alpha = chaos.sort_index(chaos.iterate_logistic(key2, chaos.BURN_IN, img.size))
        original, scrambled = dct2(img), dct2(scramble(img, alpha))
        ac = lambda c: c.ravel()[1:]
        rows.append({"image": name,
                     "ratio_original": energy_ratio(original, corner),
                     "ratio_scrambled": energy_ratio(scrambled, corner),
                     "range_original": (float(ac(original).min()), float(ac(original).max())),
                     "range_scrambled": (float(ac(scrambled).min()), float(ac(scrambled).max()))})
    return rows


def region_positions(shape, region) -> np.ndarray:
    """1-based flat indices of a square coefficient region, row-major."""
    lo, hi = REGIONS[region] if isinstance(region, str) else region
    r, c = np.mgrid[lo - 1:hi, lo - 1:hi]
    return (r * shape[1] + c).ravel() + 1


def region_experiment(images: dict, logo, qualities=(100, 90, 80, 70, 50),
                      key2: ChaosKey = DEFAULT_KEY2, delta: float = 36.0):
    """Mean BER/NC per (scrambled?, region, JPEG quality) over all images.

    The logo is encrypted with the key2 keystream and QIM-embedded into one
    fixed coefficient region, either of the scrambled image's DCT or of the
    original image's DCT.
    """
    acc = {}
    for img in images.values():
        x = chaos.iterate_logistic(key2, chaos.BURN_IN, img.size)
        alpha, keystream = chaos.sort_index(x), chaos.digitize(x, 2)
        encrypted = encrypt_watermark(logo, keystream)
        for scrambled in (True, False):
            perm = alpha if scrambled else None
            for region in REGIONS:
                pos = region_positions(img.shape, region)
                marked = embed_dct_bits(img, encrypted, pos, delta, alpha=perm)
                for q in qualities:
                    attacked = jpeg_like(marked, q)
                    carrier = scramble(attacked, alpha) if scrambled else attacked
                    bits = qim_decode(dct2(carrier).ravel()[pos - 1], delta)
                    got = encrypt_watermark(bits, keystream)
                    key = ("SI" if scrambled else "OI", region, q)
                    acc.setdefault(key, []).append((metrics.ber(logo, got), metrics.nc(logo, got)))
    return [{"domain": d, "region": r, "quality": q,
             "ber": float(np.mean([v[0] for v in vals])),
             "nc": float(np.mean([v[1] for v in vals]))}
            for (d, r, q), vals in sorted(acc.items())]


def key_sensitivity(image, logo, keys: Keys = Keys(), cfg: EmbedConfig = EmbedConfig(),
                    flip_bit: int = 127, eps: float = 1e-15):
    """NC of logos extracted with a 1-bit-flipped main key and an eps-perturbed key2,
    and the pixel agreement of the eps-perturbed scramble with the true one."""
    first, marked = watermark(image, logo, keys, cfg)
    bits = keys.key1.bits.copy()
    bits[flip_bit] ^= 1
    wrong1 = MainKey.from_bits(bits)
    wrong2 = ChaosKey(keys.key2.mu + eps, keys.key2.x0 + eps)
    right = extract_logo(marked, keys.key1, keys.key2, cfg, logo.shape)
    bad1 = extract_logo(marked, wrong1, keys.key2, cfg, logo.shape)
    bad2 = extract_logo(marked, keys.key1, wrong2, cfg, logo.shape)
    perm = lambda k: chaos.sort_index(chaos.iterate_logistic(k, chaos.BURN_IN, image.size))
    agreement = float(np.mean(scramble(image, perm(keys.key2)) == scramble(image, perm(wrong2))))
    return {"nc_right": metrics.nc(logo, right), "nc_wrong_key1": metrics.nc(logo, bad1),
            "nc_wrong_key2": metrics.nc(logo, bad2), "scramble_agreement": agreement,
            "wrong_key1": wrong1.hex, "wrong_key2": (wrong2.mu, wrong2.x0)}


SUITES = ("table2", "table3", "table4", "table5", "table6", "table7", "table8", "fig10")


def run_suite(suite: str, images: dict, logo, keys: Keys = Keys(),
              cfg: EmbedConfig = EmbedConfig()):
    if suite in ("table2", "table7"):
        return fidelity_table(images, logo, keys, cfg)
    if suite == "table6":
        return energy_table(images, keys.key2)
    if suite == "fig10":
        return region_experiment(images, logo, key2=keys.key2, delta=cfg.delta)
    groups = {"table3": FC_ATTACKS[:6], "table4": FC_ATTACKS[6:12], "table5": FC_ATTACKS[12:]}
    rows = []
    for name, img in images.items():
        if suite in groups:
            rows += feature_code_table(img, logo, groups[suite], keys, cfg, name)
        elif suite == "table8":
            rows += robustness_table(img, logo, ROBUSTNESS_ATTACKS, keys, cfg, name)
        else:
            raise ValueError(f"unknown suite {suite!r}; choose from {SUITES}")
    return rows


def write_csv(path, rows) -> None:
    if not rows:
        raise ValueError("nothing to write")
    fields = list(dict.fromkeys(k for row in rows for k in row))
    with open(path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=fields)
        writer.writeheader()
        writer.writerows(rows)
