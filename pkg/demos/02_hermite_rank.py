# coding: utf-8

# # Hermite rank of the indicator class
#
# For Y = G(X) the relevant expansion is that of x -> 1{G(X) <= x} in Hermite
# polynomials of X. The rank m is the first order whose coefficient J_q is not
# identically zero, and it decides how the empirical process scales.

# In[1]:

import numpy as np

from lrdboot import Transform, build_profile, hermite_coeff, true_cdf

for kw in ["identity", "square", "abs", "hermite:2", "hermite:3"]:
    prof = build_profile(Transform.from_keyword(kw))
    print(f"{kw:10s} rank {prof.rank}")


# Odd transforms keep rank one. Even ones kill every odd coefficient, so
# squaring pushes the rank to two.

# In[2]:

xs = np.linspace(0.1, 3, 5)
print("J_1 for square:", hermite_coeff(Transform("square"), 1, xs))
print("J_2 for square:", hermite_coeff(Transform("square"), 2, xs).round(4))


# Distribution functions and coefficients are closed forms over the exact
# preimage of (-inf, x], so no quadrature enters here.

# In[3]:

print("P(X^2 <= 1) =", true_cdf(Transform("square"), 1.0))
print("J_1(0) for identity =", hermite_coeff(Transform("identity"), 1, 0.0), "(minus the normal density at 0)")


# A piecewise-linear transform is handled the same way.

# In[4]:

g = Transform.custom([-2.0, 0.0, 1.0, 3.0], [1.0, -1.0, 0.0, 2.0])
prof = build_profile(g)
print("custom rank", prof.rank, " median", round(float(prof.quantile(0.5)), 4))
