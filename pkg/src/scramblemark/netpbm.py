"""Minimal Netpbm reader/writer: PGM (P2/P5) for images, PBM (P1/P4) for logos.

Only 8-bit grayscale is supported for PGM. PBM follows the Netpbm convention
(1 = black ink), which is also the logo bit convention used by the embedder.
"""

from pathlib import Path

import numpy as np

from .errors import WatermarkError


def _tokens(data: bytes, count: int):
    """Pull ``count`` whitespace-separated header tokens, skipping comments.

    Returns the tokens and the offset just past the single whitespace byte
    that terminates the last one (start of a binary raster).
    """
    out, pos, n = [], 0, len(data)
    while len(out) < count:
        while pos < n and data[pos:pos + 1].isspace():
            pos += 1
        if pos < n and data[pos:pos + 1] == b"#":
            while pos < n and data[pos:pos + 1] not in (b"\n", b"\r"):
                pos += 1
            continue
        start = pos
        while pos < n and not data[pos:pos + 1].isspace() and data[pos:pos + 1] != b"#":
            pos += 1
        if start == pos:
            raise WatermarkError("truncated Netpbm header")
        out.append(data[start:pos])
    return out, pos + 1


def read_pgm(path) -> np.ndarray:
    data = Path(path).read_bytes()
    (magic, w, h, maxval), off = _tokens(data, 4)
    w, h, maxval = int(w), int(h), int(maxval)
    if maxval != 255:
        raise WatermarkError(f"only maxval 255 is supported, got {maxval}")
    if magic == b"P5":
        raster = np.frombuffer(data, dtype=np.uint8, count=w * h, offset=off)
    elif magic == b"P2":
        raster = np.array(data[off - 1:].split()[: w * h], dtype=np.int64)
        if raster.size != w * h or raster.max(initial=0) > 255:
            raise WatermarkError("bad P2 raster")
        raster = raster.astype(np.uint8)
    else:
        raise WatermarkError(f"not a PGM file (magic {magic!r})")
    return raster.reshape(h, w).copy()


def write_pgm(path, image) -> None:
    a = np.asarray(image)
    if a.ndim != 2 or a.dtype != np.uint8:
        raise WatermarkError("write_pgm expects a 2-D uint8 array")
    h, w = a.shape
    Path(path).write_bytes(b"P5\n%d %d\n255\n" % (w, h) + np.ascontiguousarray(a).tobytes())


def read_pbm(path) -> np.ndarray:
    data = Path(path).read_bytes()
    (magic, w, h), off = _tokens(data, 3)
    w, h = int(w), int(h)
    if magic == b"P4":
        row_bytes = (w + 7) // 8
        packed = np.frombuffer(data, dtype=np.uint8, count=row_bytes * h, offset=off)
        bits = np.unpackbits(packed.reshape(h, row_bytes), axis=1)[:, :w]
    elif magic == b"P1":
        # P1 digits need not be separated by whitespace
        digits = [c - 48 for c in data[off - 1:] if c in b"01"]
        if len(digits) < w * h:
            raise WatermarkError("truncated P1 raster")
        bits = np.array(digits[: w * h], dtype=np.uint8).reshape(h, w)
    else:
        raise WatermarkError(f"not a PBM file (magic {magic!r})")
    return bits.astype(np.uint8)


def write_pbm(path, bits, plain: bool = False) -> None:
    b = np.asarray(bits).astype(np.uint8)
    if b.ndim != 2 or not np.isin(b, (0, 1)).all():
        raise WatermarkError("write_pbm expects a 2-D binary array")
    h, w = b.shape
    if plain:
        body = "\n".join(" ".join(str(v) for v in row) for row in b)
        Path(path).write_text(f"P1\n{w} {h}\n{body}\n")
    else:
        Path(path).write_bytes(b"P4\n%d %d\n" % (w, h) + np.packbits(b, axis=1).tobytes())
