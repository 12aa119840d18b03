# # Nilpotent orbits in exact arithmetic
#
# A degeneration of Hodge structures is recorded by a monodromy logarithm N
# and a limiting filtration F.  Everything below is done over Q or Q(i), so
# the answers are exact: no tolerances anywhere.

# %%
from nilorbit import classify_lmhs, ingest, is_nilpotent_orbit, jm_weight_filtration
from nilorbit.hodge import NilpotentCone, lmhs_splitting

# %% [markdown]
# Start with the one-parameter Calabi-Yau threefold degeneration of maximal
# unipotent type.  The fixture ships the lattice form, N and a witness F.

# %%
s = ingest("cy3_iv_h1.json")
N = s.matrices["N"]
print(N)

# %% [markdown]
# The weight filtration is read off the Jordan chains of N.  N has a single
# block of size four, so every graded piece is a line.

# %%
W = jm_weight_filtration(N)
print(W.graded_dims())

# %% [markdown]
# The orbit test checks the mixed Hodge structure conditions and the
# positivity of the polarized primitive pieces.  The certificate lists every
# check it ran.

# %%
cone, F = s.nilpotent_cone("sigma"), s.witness("sigma")
cert = is_nilpotent_orbit(cone, F, s.lattice)
print(cert.ok, [c.name for c in cert.checks][:4])

# %% [markdown]
# The Hodge diamond of the limit gives the type.  Here all four classes sit
# on the diagonal, which is type IV with a = 1.

# %%
print(lmhs_splitting(cone, F, s.lattice).table())
print(classify_lmhs(cone, F, s.lattice).tag)

# %% [markdown]
# Flipping the sign of N keeps the weight filtration but breaks positivity.

# %%
flipped = NilpotentCone(tuple(g * -1 for g in cone.generators))
print(is_nilpotent_orbit(flipped, F, s.lattice).failed)
