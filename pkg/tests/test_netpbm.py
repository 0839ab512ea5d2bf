import numpy as np
import pytest

from scramblemark import netpbm
from scramblemark.errors import WatermarkError


def test_pgm_roundtrip(tmp_path, rng):
    img = rng.integers(0, 256, (13, 7), dtype=np.uint8)
    path = tmp_path / "a.pgm"
    netpbm.write_pgm(path, img)
    assert path.read_bytes().startswith(b"P5\n7 13\n255\n")
    np.testing.assert_array_equal(netpbm.read_pgm(path), img)


def test_plain_pgm_with_comments(tmp_path):
    path = tmp_path / "b.pgm"
    path.write_bytes(b"P2\n# made by hand\n3 2\n255\n0 1 2\n253 254 255\n")
    np.testing.assert_array_equal(netpbm.read_pgm(path), [[0, 1, 2], [253, 254, 255]])


def test_pgm_rejects_16_bit(tmp_path):
    path = tmp_path / "c.pgm"
    path.write_bytes(b"P5 1 1 65535\n\x00\x00")
    with pytest.raises(WatermarkError):
        netpbm.read_pgm(path)


@pytest.mark.parametrize("plain", [False, True])
@pytest.mark.parametrize("shape", [(64, 64), (5, 11), (1, 9)])
def test_pbm_roundtrip(tmp_path, rng, plain, shape):
    bits = rng.integers(0, 2, shape).astype(np.uint8)
    path = tmp_path / "logo.pbm"
    netpbm.write_pbm(path, bits, plain=plain)
    assert path.read_bytes()[:2] == (b"P1" if plain else b"P4")
    np.testing.assert_array_equal(netpbm.read_pbm(path), bits)


def test_pbm_row_padding(tmp_path):
    path = tmp_path / "d.pbm"
    netpbm.write_pbm(path, np.array([[1, 0, 1]], np.uint8))
    assert path.read_bytes() == b"P4\n3 1\n" + bytes([0b10100000])
