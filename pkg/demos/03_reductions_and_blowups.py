# # Weight-one reductions and toric blow-up charts
#
# Type I and type IV limits of Calabi-Yau threefolds both carry a weight-one
# piece: a sub for type I and a quotient for type IV.  The reductions below
# compute it in an integral symplectic basis.

# %%
from nilorbit import ingest, source_chart, subdivision_to_blowups, type_I_restrict, type_IV_quotient
from nilorbit.cones import Cone, ConeComplex, faces
from nilorbit.logmod import boundary_orbit

# %% [markdown]
# Type I: restrict to the weight-one graded piece.  The result is a weight-one
# orbit of Hodge-Tate type on a rank two lattice.

# %%
s = ingest("cy3_i_h1.json")
red = type_I_restrict(s.nilpotent_cone("sigma"), s.witness("sigma"), s.lattice)
print(red.ok, red.reduced_type.tag)
print(red.lattice.Q)

# %% [markdown]
# Type IV: pass to the quotient.  With a = 1 the quotient is polarized.

# %%
s = ingest("cy3_iv_h1.json")
red = type_IV_quotient(s.nilpotent_cone("sigma"), s.witness("sigma"), s.lattice)
print(red.ok, red.reduced_type.tag, red.polarized.ok)

# %% [markdown]
# With a = 2 the induced form on the quotient is Lorentzian, so the reduced
# data has the right diagram but is not polarized.

# %%
h = ingest("ht14_like.json")
red = type_IV_quotient(h.nilpotent_cone("sigma_x"), h.witness("sigma_x"), h.lattice)
print(red.reduced_type.tag, red.polarized.ok)

# %% [markdown]
# A subdivision of the monodromy cone is a sequence of toric blow-ups.  Adding
# the ray (1, 1) to the positive quadrant is the ordinary blow-up of the
# origin.  Each new chart lists the old coordinates as monomials.

# %%
b = ingest("blowup_example.json")
logs = [b.matrices["Nx"], b.matrices["Ny"]]
chart = source_chart("U", ["x", "y"], logs, b.filtrations["psi0"])
quad = Cone(2, [(1, 0), (0, 1)])
target = ConeComplex.of(2, list(faces(Cone(2, [(1, 0), (1, 1)])).cones)
                        + list(faces(Cone(2, [(1, 1), (0, 1)])).cones))
plan = subdivision_to_blowups(quad, target, chart)
print(plan.script())

# %% [markdown]
# Along the exceptional divisor the monodromy is Nx + Ny and the limit is the
# same filtration, which is again a nilpotent orbit.

# %%
for c in plan.charts:
    cone, limit, cert = boundary_orbit(c, ["E_1"], b.lattice)
    print(c.name, cert.ok)

# %% [markdown]
# The ray (1, 2) gives a weighted blow-up with one orbifold chart of index 2.

# %%
target = ConeComplex.of(2, list(faces(Cone(2, [(1, 0), (1, 2)])).cones)
                        + list(faces(Cone(2, [(1, 2), (0, 1)])).cones))
print(subdivision_to_blowups(quad, target, chart).script())
