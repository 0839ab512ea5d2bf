import hashlib
from fractions import Fraction
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from scramblemark import skg
from scramblemark.errors import GeometryError, KeyOverflowError, ParameterError
from scramblemark.skg import BlockGeometry, MainKey, SubKey


def power_iteration_sigma(a, iters=500):
    """Independent route to the largest singular value: power iteration on A^T A."""
    a = np.asarray(a, dtype=np.float64)
    g = a.T @ a
    v = np.ones(g.shape[0]) / np.sqrt(g.shape[0])
    for _ in range(iters):
        w = g @ v
        n = np.linalg.norm(w)
        if n == 0:
            return 0.0
        v = w / n
    return float(np.sqrt(v @ g @ v))


@pytest.mark.parametrize("block, expected", [
    (np.eye(2), 1.0), (np.diag([3.0, 1.0]), 3.0), (np.array([[0.0, 2.0], [0.0, 0.0]]), 2.0),
    (np.zeros((3, 3)), 0.0),
])
def test_max_singular_value_examples(block, expected):
    assert skg.max_singular_value(block) == pytest.approx(expected, rel=1e-12, abs=1e-12)


def test_max_singular_value_matches_power_iteration(rng):
    for _ in range(20):
        a = rng.uniform(0, 255, (68, 68))
        assert skg.max_singular_value(a) == pytest.approx(power_iteration_sigma(a), rel=1e-6)


def test_bits_hex_roundtrip():
    bits = np.array([1, 0, 1, 1, 0, 0, 0, 1, 1], dtype=np.uint8)
    assert skg.bits_to_hex(bits) == "b18"
    np.testing.assert_array_equal(skg.bits_from_hex("b18", 9), bits)


def test_main_key_lengths():
    for n in (128, 256, 512):
        assert MainKey.random(n).bits.size == n
    with pytest.raises(ParameterError):
        MainKey("abcd")
    with pytest.raises(ParameterError):
        SubKey("00" * 31)


def test_geometry_code_length():
    g = BlockGeometry()
    assert g.side == 168
    assert g.block_count((512, 512)) == 9
    assert g.code_length((512, 512)) == 153


def test_constant_image_gives_zero_codes():
    fc = skg.extract_feature_codes(np.full((512, 512), 77, np.uint8))
    assert fc.size == 153 and not fc.any()


def brute_force_codes(image, m, n):
    side = m + n
    vals = []
    for br in range(image.shape[0] // side):
        for bc in range(image.shape[1] // side):
            blk = image[br * side:(br + 1) * side, bc * side:(bc + 1) * side].astype(float)
            vals.append(power_iteration_sigma(blk[:n, :n]))
            vals.append(power_iteration_sigma(blk[m:m + n, m:m + n]))
    return np.array([1 if vals[i] > vals[j] else 0 for i, j in combinations(range(len(vals)), 2)])


def test_tiny_geometry_increasing_values():
    # blocks of 2x2, sub-block A = top-left pixel, B = bottom-right pixel
    img = np.zeros((4, 4), np.uint8)
    values = iter(range(10, 90, 10))
    for br in range(2):
        for bc in range(2):
            img[2 * br, 2 * bc] = next(values)
            img[2 * br + 1, 2 * bc + 1] = next(values)
    fc = skg.extract_feature_codes(img, BlockGeometry(1, 1))
    assert fc.size == 28 and not fc.any()
    np.testing.assert_array_equal(fc, brute_force_codes(img, 1, 1))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2 ** 32 - 1), st.integers(1, 4), st.integers(0, 3))
def test_feature_codes_match_brute_force(seed, n, extra):
    m = n + extra
    r = np.random.default_rng(seed)
    side = m + n
    img = r.integers(0, 256, (2 * side + 1, 3 * side), dtype=np.uint8)
    fc = skg.extract_feature_codes(img, BlockGeometry(m, n))
    l = 6
    assert fc.size == l * (2 * l - 1)
    np.testing.assert_array_equal(fc, brute_force_codes(img, m, n))


def test_image_smaller_than_block():
    with pytest.raises(GeometryError):
        skg.extract_feature_codes(np.zeros((100, 500), np.uint8))


def test_lena_class_code_length(lena):
    assert skg.extract_feature_codes(lena).size == 153


def test_feature_codes_distinct_across_images(images):
    codes = {skg.bits_to_hex(skg.extract_feature_codes(im)) for im in images.values()}
    assert len(codes) == len(images)


def test_feature_code_hex_is_39_digits(lena):
    text = skg.bits_to_hex(skg.extract_feature_codes(lena))
    assert len(text) == 39 and int(text[-1], 16) & 0b111 == 0


def test_sha3_primitive_vector():
    assert hashlib.sha3_256(b"").hexdigest() == (
        "a7ffc6f8bf1ed76651c14756a061d662f580ff4de43b49fa82d80a4b80f8434a")


def test_derive_subkey_packing():
    # oracle: assemble the 136-byte message by hand and hash it
    key1 = MainKey("bae63457983b9e7d052f5867dee30024")
    fc = np.zeros(153, np.uint8)
    fc[[0, 5, 152]] = 1
    bits = np.concatenate([key1.bits, fc, np.zeros(1088 - 128 - 153, np.uint8)])
    message = int("".join(map(str, bits)), 2).to_bytes(136, "big")
    assert skg.derive_subkey(key1, fc).hex == hashlib.sha3_256(message).hexdigest()
    assert skg.derive_subkey(key1, fc) == skg.derive_subkey(key1, fc.copy())


def test_derive_subkey_overflow():
    with pytest.raises(KeyOverflowError):
        skg.derive_subkey(MainKey.random(512), np.zeros(577, np.uint8))
    skg.derive_subkey(MainKey.random(512), np.zeros(576, np.uint8))


def test_subkey_avalanche(rng):
    key1 = MainKey.random(128)
    fc = rng.integers(0, 2, 153).astype(np.uint8)
    base = skg.derive_subkey(key1, fc).bits
    for pos in rng.integers(0, 153, 100):
        flipped = fc.copy()
        flipped[pos] ^= 1
        d = int(np.sum(skg.derive_subkey(key1, flipped).bits != base))
        assert 96 <= d <= 160


def test_seed_clamping():
    assert skg.subkey_to_seed(SubKey("0" * 64)) == 2.0 ** -53
    assert skg.subkey_to_seed(SubKey("f" * 64)) == 1 - 2.0 ** -53


def test_seed_bit_weights():
    # SK_i (the i-th bit of the stream) has weight 2^i
    bits = np.zeros(256, np.uint8)
    bits[255] = 1
    seed = skg.subkey_to_seed(SubKey.from_bits(bits))
    assert seed == float(Fraction(2 ** 255, 2 ** 256 - 1))
    assert seed == pytest.approx(0.5)


@settings(max_examples=100)
@given(st.integers(1, 2 ** 256 - 2))
def test_seed_matches_rational(value):
    bits = np.array([(value >> i) & 1 for i in range(256)], np.uint8)
    seed = skg.subkey_to_seed(SubKey.from_bits(bits))
    expected = min(max(float(Fraction(value, 2 ** 256 - 1)), 2.0 ** -53), 1 - 2.0 ** -53)
    assert seed == expected
