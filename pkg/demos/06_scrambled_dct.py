# %% [markdown]
# Why scramble before the DCT
#
# A natural image packs its energy into low frequencies. After a chaotic
# pixel permutation it looks like noise, the spectrum is flat, and every
# coefficient region is equally good (or bad) for hiding bits.

# %%
from scramblemark import experiments, testimages

images = testimages.load_all()
for r in experiments.energy_table(images):
    print(f"{r['image']:10s} original {r['ratio_original']:.4f}  scrambled {r['ratio_scrambled']:.4f}")

# %% Logo in LF / IF / HF regions, then JPEG-style quantization at Q=70
rows = experiments.region_experiment(images, testimages.logo(), qualities=(90, 70, 50))
for r in rows:
    print(f"{r['domain']} {r['region']} Q={r['quality']:3d}  BER {r['ber']:.4f}")
