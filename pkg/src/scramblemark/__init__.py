"""Blind watermarking in the DCT domain of a chaotically scrambled image.

A binary logo is QIM-embedded into full-frame DCT coefficients of a
logistic-map scrambled image at positions chosen by a sub key, which hashes
the main key together with SVD feature codes of the image. A second,
spatial watermark along two rays gives rotation and translation sync.
"""

from .chaos import ChaosKey
from .detect import GeometryEstimate, detect, extract_logo, rectify
from .embed import EmbedConfig, embed, embed_logo, embed_oriented
from .errors import WatermarkError
from .skg import BlockGeometry, MainKey, SubKey

__all__ = [
    "BlockGeometry", "ChaosKey", "EmbedConfig", "GeometryEstimate", "MainKey", "SubKey",
    "WatermarkError", "detect", "embed", "embed_logo", "embed_oriented", "extract_logo",
    "rectify",
]
__version__ = "0.1.0"
