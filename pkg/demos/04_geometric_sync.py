# %% [markdown]
# Rotation and translation synchronization
#
# The orientation template is the same 150-bit chaotic sequence written along
# rays at 30 and 150 degrees. Scanning all 360 directions and correlating
# finds the rays again; their bisector tells how far the image was turned.

# %%
import numpy as np

from scramblemark import attacks, experiments, testimages
from scramblemark.detect import detect

keys = experiments.Keys()
_, marked = experiments.watermark(testimages.load(testimages.LENA_CLASS), testimages.logo(), keys)

est, scan = detect(marked, keys.key3)
print("unattacked:", est.peak_pair, "rotation", est.rotation, "confidence", est.confidence)

# %% Rotate by 8 degrees counterclockwise
rotated = attacks.rotate_attack(marked, 8)
est, scan = detect(rotated, keys.key3)
top = np.argsort(scan.cc_values)[::-1][:4] + 1
print("strongest angles:", top, "->", est)

# %% Shift 40 pixels toward 30 degrees clockwise and search along that direction
shifted = attacks.translate_attack(marked, 40, -30)
est, _ = detect(shifted, keys.key3, max_shift=60, direction=-30)
print("translation estimate:", est.translation, "confidence", est.confidence)

# %% An image without the template stays below the 0.5 threshold
est, _ = detect(testimages.load("coffee"), keys.key3)
print("unmarked image found?", est.found, "confidence", round(est.confidence, 3))
