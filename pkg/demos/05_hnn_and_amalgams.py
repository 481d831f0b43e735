# %% [markdown]
# BS(1,2), Britton reduction and the free amalgam
#
# a acts as t -> t + 1 and b as t -> t / 2 on the dyadic rationals.  The
# path group <a, b, c | Sq(a, b), Sq(b, c)> is an HNN extension of BS(1,2)
# with stable letter c, so Britton reduction decides its word problem.

# %%
from soplab.groups import (
    adjacency_type_check,
    bs12_chain_check,
    britton_reduce,
    build_free_amalgam,
    parse_word,
    sq_pair,
)

print(bs12_chain_check().values)

# %%
gens = ["a", "b", "c"]
for text in ("c-1 a c", "c-1 b c", "c-1 b c b-2"):
    form = britton_reduce(parse_word(text, gens))
    print(f"{text:12s} stable letters={form.stable_count} identity={form.is_identity}")
    for step in form.steps:
        print("   ", step.kind, step.before, "->", step.after)

# %%
fa = build_free_amalgam(sq_pair())
print(fa.flat.to_text())
print(adjacency_type_check(fa, sq_pair()).status)
