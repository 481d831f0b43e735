# %% [markdown]
# Coset enumeration
#
# A directed triangle of Sq relations collapses the group, while the 4-cycle
# (the Higman group) is infinite, so enumeration can only ever overflow.

# %%
from soplab.groups import Presentation, preset, todd_coxeter, verify_table

tri = preset("triangle")
print(tri.to_text())
table = todd_coxeter(tri, [], 10**6)
print(table.status, table.stats)

# %%
small = Presentation(["a", "b"], ["a3", "b2", "a b a b"])
table = todd_coxeter(small, [], 1000)
print(table.status, verify_table(table, small))
for row in table.rows:
    print(row)

# %%
print(todd_coxeter(preset("higman"), [], 10**4).status)
