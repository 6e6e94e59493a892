# coding: utf-8

# # A Gaussian bootstrap limit for a non-Gaussian statistic
#
# With G = H_2 the rank is two and the normalised empirical process at a point
# has a skewed Rosenblatt-type limit. The block bootstrap version, conditional
# on the data, is close to normal instead. A reduced version of the
# ``hermite2-m2`` preset makes the contrast visible in about a minute.

# In[1]:

from lrdboot.experiments import normality_diagnostics, preset, run_scenario

report = run_scenario(preset("hermite2-m2", n=[8192], R=150, A=300))
lev = report.level(8192)
print("x0 =", round(lev.x0, 4), " J_2(x0) =", round(lev.jm_x0, 4))


# In[2]:

orig = normality_diagnostics(lev.pool("empirical_x0"))
boot = normality_diagnostics(lev.pool("bootstrap_empirical_x0"))
print(f"original   skew {orig.skewness:+.3f}  excess kurtosis {orig.excess_kurtosis:+.3f}")
print(f"bootstrap  skew {boot.skewness:+.3f}  excess kurtosis {boot.excess_kurtosis:+.3f}")


# The same preset runs from the shell and writes its report files:
#
#     lrdboot run --preset hermite2-m2 --out out/hermite2 --threads 4
