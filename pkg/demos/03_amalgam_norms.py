# %% [markdown]
# Infimal-convolution norms on the amalgamated space
#
# The norm of a vector on V_m is the cheapest way to split it into blocks,
# each living on two consecutive copies.  It is computed by an exact
# simplex; the decomposition it returns is a certificate for the value.

# %%
from fractions import Fraction

from soplab.amalgam import (
    AmalgamSpace,
    canonical_provider,
    rho_estimate,
    sequence_norm_profile,
    simple_provider,
    verify_convergence_claims,
)

sp = AmalgamSpace(simple_provider(), 2)
t = sp.lift(0, [1]) + sp.lift(2, [1])
value, dec = sp.infconv(t, 1)
print(value, dec.blocks)

# %%
for k, tag, v in sequence_norm_profile(canonical_provider(), [1, 0], [0, 1], 6):
    if tag == -1:
        print(k, v, 2 - Fraction(2, k))

# %%
for rep in verify_convergence_claims(canonical_provider(), [1, 0], [0, 1], 3):
    print(rep.claim, rep.status)
est, rep = rho_estimate(canonical_provider(), [1, 0], [0, 1], 4)
print(est.lower, est.upper, est.width)
