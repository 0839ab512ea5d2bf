# %% [markdown]
# Robustness to common processing
#
# Extraction after noise, JPEG-style quantization and low-pass filtering.
# The logo lives in coefficients spread over the whole spectrum, so noise
# and strong smoothing cost bits while mild compression does not.

# %%
from scramblemark import experiments, testimages

rows = experiments.robustness_table(testimages.load(testimages.LENA_CLASS), testimages.logo(),
                                    name=testimages.LENA_CLASS)
print(f"{'attack':26s} {'PSNR':>7s} {'BER':>7s} {'NC':>6s}")
for r in rows:
    print(f"{r['attack']:26s} {r['psnr_vs_original']:7.2f} {r['ber']:7.4f} {r['nc']:6.3f}")
