"""Image-dependent sub key generation.

Feature codes are pairwise comparisons of the largest singular value of
2*l sub-blocks. The sub key is SHA3-256 over the main key followed by the
feature codes, zero padded to one 1088-bit rate block. Bits are always
handled most-significant-first when packed into bytes or hex.
"""

import hashlib
import secrets
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import GeometryError, KeyOverflowError, ParameterError, WatermarkError

MAIN_KEY_SIZES = (128, 256, 512)
SUBKEY_BITS = 256
HASH_BLOCK_BITS = 1088
SEED_EPS = 2.0 ** -53


def bits_from_hex(text: str, nbits: int | None = None) -> np.ndarray:
    text = text.strip().lower()
    try:
        value = bytes.fromhex(text if len(text) % 2 == 0 else text + "0")
    except ValueError as exc:
        raise WatermarkError(f"not a hex string: {text!r}") from exc
    bits = np.unpackbits(np.frombuffer(value, dtype=np.uint8))[: 4 * len(text)]
    if nbits is not None:
        if nbits > bits.size or bits[nbits:].any():
            raise WatermarkError(f"hex string does not encode exactly {nbits} bits")
        bits = bits[:nbits]
    return bits.astype(np.uint8)


def bits_to_hex(bits) -> str:
    """Hex of a bit sequence, right-padded with zero bits to a whole hex digit."""
    b = np.asarray(bits, dtype=np.uint8)
    pad = (-b.size) % 4
    b = np.concatenate([b, np.zeros(pad, dtype=np.uint8)])
    digits = b.reshape(-1, 4) @ np.array([8, 4, 2, 1])
    return "".join("0123456789abcdef"[d] for d in digits)


@dataclass(frozen=True)
class MainKey:
    """Secret main key, stored as lowercase hex (128, 256 or 512 bits)."""

    hex: str

    def __post_init__(self):
        h = self.hex.strip().lower()
        if 4 * len(h) not in MAIN_KEY_SIZES:
            raise ParameterError(f"main key must be 128, 256 or 512 bits, got {4 * len(h)}")
        bits_from_hex(h)
        object.__setattr__(self, "hex", h)

    @property
    def bits(self) -> np.ndarray:
        return bits_from_hex(self.hex)

    @classmethod
    def from_bits(cls, bits) -> "MainKey":
        return cls(bits_to_hex(bits))

    @classmethod
    def random(cls, nbits: int = 128) -> "MainKey":
        if nbits not in MAIN_KEY_SIZES:
            raise ParameterError(f"main key must be 128, 256 or 512 bits, got {nbits}")
        return cls(secrets.token_hex(nbits // 8))


@dataclass(frozen=True)
class SubKey:
    hex: str

    def __post_init__(self):
        h = self.hex.strip().lower()
        if 4 * len(h) != SUBKEY_BITS:
            raise ParameterError("sub key must be exactly 256 bits")
        bits_from_hex(h)
        object.__setattr__(self, "hex", h)

    @property
    def bits(self) -> np.ndarray:
        return bits_from_hex(self.hex)

    @classmethod
    def from_bits(cls, bits) -> "SubKey":
        return cls(bits_to_hex(bits))


@dataclass(frozen=True)
class BlockGeometry:
    """Feature blocks are (m+n) x (m+n); each yields two n x n sub-blocks."""

    m: int = 100
    n: int = 68

    def __post_init__(self):
        if not (self.m >= self.n >= 1):
            raise GeometryError(f"need m >= n >= 1, got m={self.m}, n={self.n}")

    @property
    def side(self) -> int:
        return self.m + self.n

    def block_count(self, shape) -> int:
        M, N = shape
        return (M // self.side) * (N // self.side)

    def code_length(self, shape) -> int:
        l = self.block_count(shape)
        return l * (2 * l - 1)


def max_singular_value(block) -> float:
    a = np.asarray(block, dtype=np.float64)
    if a.ndim != 2 or a.size == 0:
        raise GeometryError("need a nonempty 2-D matrix")
    return float(np.linalg.svd(a, compute_uv=False)[0])


def sub_blocks(image, geom: BlockGeometry = BlockGeometry()):
    """Yield the 2*l sub-blocks in block-major order (top-left corner, then bottom-right)."""
    a = np.asarray(image, dtype=np.float64)
    M, N = a.shape
    s, m, n = geom.side, geom.m, geom.n
    if M < s or N < s:
        raise GeometryError(f"image {M}x{N} smaller than one {s}x{s} feature block")
    for br in range(M // s):
        for bc in range(N // s):
            r0, c0 = br * s, bc * s
            yield a[r0:r0 + n, c0:c0 + n]
            yield a[r0 + m:r0 + m + n, c0 + m:c0 + m + n]


def block_singular_values(image, geom: BlockGeometry = BlockGeometry()) -> np.ndarray:
    return np.array([max_singular_value(b) for b in sub_blocks(image, geom)])


def codes_from_singular_values(s) -> np.ndarray:
    s = np.asarray(s, dtype=np.float64)
    i, j = np.triu_indices(s.size, k=1)
    return (s[i] > s[j]).astype(np.uint8)


def extract_feature_codes(image, geom: BlockGeometry = BlockGeometry()) -> np.ndarray:
    """Binary feature codes of length l*(2l-1), pairs (i, j) with i < j in lexicographic order."""
    return codes_from_singular_values(block_singular_values(image, geom))


def derive_subkey(key1: MainKey, fc) -> SubKey:
    fc = np.asarray(fc, dtype=np.uint8)
    msg = np.concatenate([key1.bits, fc])
    if msg.size > HASH_BLOCK_BITS:
        raise KeyOverflowError(
            f"main key ({key1.bits.size}) + feature codes ({fc.size}) exceed {HASH_BLOCK_BITS} bits")
    msg = np.concatenate([msg, np.zeros(HASH_BLOCK_BITS - msg.size, dtype=np.uint8)])
    digest = hashlib.sha3_256(np.packbits(msg).tobytes()).digest()
    return SubKey(digest.hex())


def subkey_to_seed(sk: SubKey) -> float:
    """Bit i of the sub key carries weight 2**i; scale into (0, 1) and clamp off the fixed points."""
    bits = sk.bits
    value = int("".join(map(str, bits[::-1])), 2)
    y0 = float(Fraction(value, 2 ** bits.size - 1))
    return min(max(y0, SEED_EPS), 1.0 - SEED_EPS)
