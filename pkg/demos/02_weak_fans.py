# # Refining a family of cones into a weak fan
#
# A collection of nilpotent cones, each with a witness filtration, is a weak
# fan when cones whose open parts meet have a common face structure up to the
# group action.  Crossing cones are repaired by chamber subdivision.

# %%
from nilorbit import build_weak_fan, ingest, weak_fan_check
from nilorbit.fans import fan_check, same_system

# %% [markdown]
# Two crossing cones of weight-one nilpotents.  The plain fan check finds the
# overlap.

# %%
s = ingest("weight1_witness.json")
rep = fan_check(s.to_system())
print(rep.verdicts)
print(rep.violations[0]["kind"])

# %% [markdown]
# The build step subdivides into chambers and re-checks every cell.  Running
# it twice changes nothing.

# %%
refined, rep = build_weak_fan(s.to_system())
print(len(refined.cones), rep.verdicts)
again, _ = build_weak_fan(refined)
print(same_system(refined, again))

# %% [markdown]
# A larger family: six cones in a rank eight lattice of weight three.  Before
# refinement the face closure mixes types I and IV.

# %%
h = ingest("ht14_like.json")
raw = weak_fan_check(h.to_system())
print(raw.verdicts["weak_fan"], raw.details["types"])

# %% [markdown]
# After refinement every verdict holds.  Verdicts are always relative to the
# witnesses supplied with the input.

# %%
fine, rep = build_weak_fan(h.to_system())
print(rep.verdicts)
print(rep.to_json()["qualifier"])
