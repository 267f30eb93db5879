# %% [markdown]
# # Forms, brackets and the reference G2-structure
#
# A left-invariant G2-structure on a Lie group is a positive 3-form on its
# Lie algebra.  Everything here lives on R^7 with basis e1..e7.

# %%
import numpy as np

from g2solv import PHI, PSI, G2Structure, LieBracket, metric_from_threeform
from g2solv.exterior import basis_form, gl_pullback, hodge
from g2solv.liealg import ce_differential, structure_flags

# %% [markdown]
# The reference form and the metric it induces.

# %%
print(PHI)
g, vol = metric_from_threeform(PHI)
print("metric is identity:", np.allclose(g, np.eye(7)), " vol =", vol)
print("phi ^ *phi =", (PHI ^ PSI).coeffs[0])

# %% [markdown]
# Acting by GL(7) changes the metric: h.phi induces (h^-1)^t h^-1.

# %%
h = np.diag([1, 2, 1, 1, 1, 1, 0.5])
g_h, _ = metric_from_threeform(gl_pullback(h, PHI))
print(np.round(np.diag(g_h), 6))

# %% [markdown]
# A bracket is a tensor of structure constants.  With [e1, e2] = e3 the
# differential sends e^3 to -e^{12}.

# %%
heis = LieBracket.from_terms([(1, 2, 3, 1.0)])
print(structure_flags(heis))
print("d e3 =", ce_differential(heis, basis_form("3")))

# %% [markdown]
# Closed means d phi = 0.  The Heisenberg factor is not closed for this phi,
# the almost-abelian bracket of E12 is.

# %%
from g2solv.families import catalog
from g2solv.liealg import mu_from_matrix

for name, mu in [("heis", heis), ("E12", mu_from_matrix(catalog("mu2")))]:
    s = G2Structure(mu)
    print(f"{name:5s} closed={s.is_closed()} |tau|^2={s.tau_norm2:.4f}")
