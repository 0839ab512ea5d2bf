"""Stand-in test set: five 512x512 grayscale natural images and a 64x64 logo.

The classic USC-SIPI pictures are not redistributable here, so the images
come from the scikit-image sample data (BSD licensed, bundled with the
package, no download). Colour images are converted with ITU-R 601 luma and
non-square ones are center-cropped before resampling to 512x512.
"""

import numpy as np

from .imgops import quantize_pixels

SIZE = 512
# "astronaut" is the portrait stand-in for Lena in single-image experiments
NAMES = ("astronaut", "camera", "coffee", "gravel", "coins")
LENA_CLASS = "astronaut"


def _luma(rgb):
    rgb = np.asarray(rgb, dtype=np.float64)[..., :3]
    return rgb @ np.array([0.299, 0.587, 0.114])


def _square(a, size):
    from skimage.transform import resize

    M, N = a.shape
    s = min(M, N)
    r0, c0 = (M - s) // 2, (N - s) // 2
    a = a[r0:r0 + s, c0:c0 + s]
    if s != size:
        a = resize(a, (size, size), order=3, anti_aliasing=True, preserve_range=True)
    return a


def load(name: str, size: int = SIZE) -> np.ndarray:
    """One test image as a ``size x size`` uint8 raster."""
    try:
        from skimage import data
    except ImportError as exc:  # pragma: no cover
        raise ImportError("test images need scikit-image (pip install 'artifact[data]')") from exc
    raw = getattr(data, name)()
    a = _luma(raw) if raw.ndim == 3 else raw.astype(np.float64)
    return quantize_pixels(_square(a, size))


def load_all(size: int = SIZE) -> dict:
    return {name: load(name, size) for name in NAMES}


def logo(size: int = 64) -> np.ndarray:
    """Binary 64x64 logo, 1 = ink: a filled disc with the letters "WM" knocked out.

    Roughly 60% of the bits are 1. The ink fraction matters for NC, which is
    not symmetric in 0 and 1: a mostly-ink logo inflates NC for random
    (wrong-key) extractions, a mostly-background logo depresses NC under noise.
    """
    H = W = size
    u = size / 64.0
    rows, cols = np.mgrid[0:H, 0:W]
    rc, cc = (H - 1) / 2, (W - 1) / 2
    ink = np.hypot(rows - rc, cols - cc) <= 30.5 * u

    def bar(r0, r1, c0, c1):
        return (rows >= r0 * u) & (rows < r1 * u) & (cols >= c0 * u) & (cols < c1 * u)

    def slant(r0, r1, ca, cb, width):
        # stroke from (r0, ca) to (r1, cb)
        t = (rows - r0 * u) / ((r1 - r0) * u)
        centre = (ca + (cb - ca) * t) * u
        return (t >= 0) & (t <= 1) & (np.abs(cols - centre) <= width * u / 2)

    top, bottom = 20, 44
    letters = slant(top, bottom, 8, 13, 4) | slant(bottom, top + 7, 13, 18, 4)
    letters |= slant(top + 7, bottom, 18, 23, 4) | slant(bottom, top, 23, 28, 4)
    letters |= bar(top, bottom, 34, 38) | bar(top, bottom, 51, 55)
    letters |= slant(top, top + 14, 36, 44.5, 4) | slant(top + 14, top, 44.5, 53, 4)
    return (ink & ~letters).astype(np.uint8)
