# %% [markdown]
# Embedding and blind extraction
#
# Process I hides a 64x64 logo in 4096 DCT coefficients of the scrambled
# image; process II writes the orientation template along two rays.
# Extraction needs only the watermarked image and the keys.

# %%
from scramblemark import metrics, testimages
from scramblemark.chaos import ChaosKey
from scramblemark.detect import extract_logo
from scramblemark.embed import EmbedConfig, embed
from scramblemark.skg import MainKey

key1 = MainKey.random(128)
key2 = ChaosKey(3.99, 0.123456789)
key3 = ChaosKey(3.97986502162631, 0.64246416698522)
cfg = EmbedConfig(delta=36, delta_prime=18, theta=60)

img = testimages.load("camera")
logo = testimages.logo()
marked = embed(img, logo, key1, key2, key3, cfg)
print(f"PSNR {metrics.psnr(img, marked):.2f} dB, SSIM {metrics.ssim(img, marked):.4f}")

# %%
got = extract_logo(marked, key1, key2, cfg)
print("BER", metrics.ber(logo, got), "NC", metrics.nc(logo, got))

# %% The logo as text
for row in got[::4]:
    print("".join("#" if v else "." for v in row[::2]))
