# coding: utf-8

# # Long-memory Gaussian paths
#
# Two covariance families ship with the package. Fractional Gaussian noise is
# parametrised by its Hurst index, the polynomial family by the decay exponent
# D directly. Both decay like k^(-D), slowly enough that the autocovariances
# are not summable.

# In[1]:

import numpy as np

from lrdboot import CovarianceModel, autocovariance, normalizer_dn, simulate_path

fgn = CovarianceModel.fgn(0.8)
poly = CovarianceModel.poly(0.3)
lags = np.array([1, 10, 100, 1000])
print("fGn   ", autocovariance(fgn, lags).round(4), f" D = {fgn.d_exp_effective:g}")
print("poly  ", autocovariance(poly, lags).round(4), f" D = {poly.d_exp_effective:g}")


# Paths come from circulant embedding, so they are exact draws, not
# approximations. A given seed always regenerates the same path.

# In[2]:

path = simulate_path(poly, 4096, seed=7)
print(path.values[:5])
assert np.array_equal(path.values, simulate_path(poly, 4096, seed=7).values)


# A quick check of the lag-one correlation across many short paths.

# In[3]:

x = np.array([simulate_path(poly, 32, seed=s).values for s in range(5000)])
print(f"lag-1 estimate {np.mean(x[:, 0] * x[:, 1]):.4f}  target {autocovariance(poly, 1):.4f}")


# The variance of partial sums grows like n^(2H) with H = 1 - D/2, faster than
# the n of short memory. The slope of log d_n against log n shows it.

# In[4]:

ns = 2 ** np.arange(10, 17)
d = [normalizer_dn(poly, 1, int(n)) for n in ns]
slope = np.polyfit(np.log(ns), np.log(d), 1)[0]
print(f"fitted growth exponent {slope:.3f}  vs  H = {1 - 0.3 / 2:.3f}")
