# %% [markdown]
# Feature codes and the sub key
#
# The embedding positions depend on the image itself: nine 168x168 blocks
# each give two 68x68 sub-blocks, their largest singular values are compared
# pairwise (153 bits), and SHA3-256 of main key + codes becomes the sub key.

# %%
from scramblemark import attacks, experiments, skg, testimages

images = testimages.load_all()
for name, img in images.items():
    print(f"{name:10s}", skg.bits_to_hex(skg.extract_feature_codes(img)))

# %% The codes survive mild processing, so the receiver can rebuild the sub key
lena = images[testimages.LENA_CLASS]
fc = skg.extract_feature_codes(lena)
for label, out in [("awgn sigma=10", attacks.awgn(lena, 10, seed=1)),
                   ("jpeg_like Q=20", attacks.jpeg_like(lena, 20)),
                   ("mean 3x3", attacks.mean_filter3(lena)),
                   ("crop 25%", attacks.crop_attack(lena, 0.25))]:
    changed = int((skg.extract_feature_codes(out) != fc).sum())
    print(f"{label:16s} bits changed: {changed}")

# %% Sub key and chaotic seed
sk = skg.derive_subkey(experiments.DEFAULT_KEY1, fc)
print("sub key:", sk.hex)
print("seed y0:", skg.subkey_to_seed(sk))
