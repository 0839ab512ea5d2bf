# %% [markdown]
# Logistic-map keys
#
# Every secret permutation and keystream in the scheme comes from the
# logistic map x <- mu*x*(1-x), iterated 500 times before anything is kept.
# Here we look at the sign sequences it produces and at how they correlate.

# %%
import numpy as np

from scramblemark import chaos
from scramblemark.chaos import ChaosKey

key = ChaosKey(3.99, 0.123456)
x = chaos.iterate_logistic(key, burn_in=500, length=10_000)
print("first values:", np.round(x[:5], 6))
print("mean of 10^4 values:", round(float(x.mean()), 4))

# %% The low decimal digits decide the bit, so neighbouring keys diverge at once
b = chaos.sign_sequence(key, 1000)
b_near = chaos.sign_sequence(ChaosKey(3.99, 0.123456 + 1e-15), 1000)
print("agreement with x0 + 1e-15:", float(np.mean(b == b_near)))

# %% Autocorrelation is a spike at tau = 0, cross-correlation stays flat
ac = chaos.correlation_curve(b, b, 50)
cc = chaos.correlation_curve(b, b_near, 50)
print("AC(0) =", ac[50], " max |AC(tau != 0)| =", round(float(np.abs(np.delete(ac, 50)).max()), 3))
print("max |CC| =", round(float(np.abs(cc).max()), 3))

# %% Sorting the sequence gives the scrambling permutation (1-based)
alpha = chaos.sort_index(chaos.iterate_logistic(key, 500, 12))
print("alpha for a 3x4 image:", alpha)
