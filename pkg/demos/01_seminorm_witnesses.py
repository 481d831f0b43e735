# %% [markdown]
# Witness vectors and the B0 seminorm
#
# Every quantity here is an exact rational.  The seminorm is evaluated with a
# sweep over the finitely many breakpoints of the support, so the printed
# numbers are the true values and not approximations.

# %%
from soplab.banach import chain_pair, check_eq1_eq2, witness_c
from soplab.qlinalg import a, b, seminorm_b0

print(witness_c(5, 2, 3).vector)

# %%
# adjacent levels, alpha < beta: always distance 2
v = witness_c(5, 3, 7).vector - witness_c(5, 2, 4).vector
print("path distance", seminorm_b0(v))

# level m against level 0 from the other side: 2m + 1
for m in range(6):
    v = witness_c(5, m, 1).vector - witness_c(5, 0, 6).vector
    print("gap", m, seminorm_b0(v))

# %%
for rep in check_eq1_eq2(7, 11):
    print(rep.claim, rep.status, rep.values["checked"])

# %%
# the kernel of the seminorm is not trivial
print(seminorm_b0(a(0) - a(1) - b(1) + b(0)))
print(chain_pair(2))
