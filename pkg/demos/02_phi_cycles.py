# %% [markdown]
# The formula phi_n on pairs of tuples
#
# phi_n(x, y) is a conjunction of norm bounds.  Along the chain of witness
# pairs it holds forwards and fails backwards; the randomized search below
# looks for a closed cycle and, on every attempt whose path edges are small,
# records the telescoping bound that rules the cycle out.

# %%
from soplab.banach import chain_pair, chain_verify, cycle_search_and_certify, phi_eval

x, y = chain_pair(0), chain_pair(1)
fwd = phi_eval(3, x, y)
back = phi_eval(3, y, x)
print("forward", fwd.verdict, "backward", back.verdict)
for row in back.failing:
    print("  fails:", row)

# %%
print(chain_verify(7, 16).values)

# %%
rep = cycle_search_and_certify(5, 3, 2000, seed=1)
print(rep.status, {k: rep.values[k] for k in ("closed", "certified", "certificate_bound", "required")})
print(rep.values["certificate_examples"][0])
