# %% [markdown]
# Key sensitivity and key-space arithmetic

# %%
from scramblemark import experiments, metrics, testimages

r = experiments.key_sensitivity(testimages.load(testimages.LENA_CLASS), testimages.logo())
print("NC with the right keys     ", round(r["nc_right"], 3))
print("NC with one main-key bit off", round(r["nc_wrong_key1"], 3))
print("NC with key2 off by 1e-15  ", round(r["nc_wrong_key2"], 3))
print("scramble agreement         ", r["scramble_agreement"])

# %%
for bits in (128, 256, 512):
    print(f"main key {bits}: key space 2^{metrics.key_space_bits(bits):.0f}")
print("log10 P(guess positions and order):", round(metrics.p_success_guess(512 ** 2, 64 ** 2), 2))
print("P(locate a position from 5 pixels):", metrics.p_success_positions(5))
