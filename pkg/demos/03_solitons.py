# %% [markdown]
# # Laplacian and Ricci solitons
#
# An algebraic Laplacian soliton satisfies Laplacian(phi) = c phi + theta(D) phi
# for a derivation D.  The fit is a small least-squares problem; a tiny
# residual certifies a soliton, a large one only rules out algebraic ones.

# %%
import numpy as np

from g2solv import G2Structure, laplacian_soliton_fit, ricci_soliton_residual
from g2solv.families import catalog
from g2solv.liealg import AlmostAbelianSpec, mu_from_matrix

for t in (0.3, 0.7, 1.2):
    fit = laplacian_soliton_fit(G2Structure(mu_from_matrix(catalog("B_t", t=t))))
    print(f"B_{t}: residual {fit.residual:.1e}, c = {fit.c:.4f}, {fit.kind}")

# %% [markdown]
# Along the mu6 curve the Ricci soliton (nilsoliton) sits at a = 1.  With the
# conventions used here the Laplacian soliton sits at a = 1/sqrt(2); the
# transposed parametrization moves it to sqrt(2).  F takes the value 3/4
# at both points because F(a) = F(1/a).

# %%
for a in (0.5, 1 / np.sqrt(2), 1.0, np.sqrt(2), 2.0):
    mu = mu_from_matrix(catalog("mu6", a=a))
    lap = laplacian_soliton_fit(G2Structure(mu)).residual
    ric = ricci_soliton_residual(mu).residual
    print(f"a={a:.4f}  Laplacian residual {lap:.2e}  Ricci residual {ric:.2e}")

# %% [markdown]
# A non-normal semisimple matrix is neither.

# %%
A = np.array([[1, 1, 0], [0, -1, 0], [0, 0, 0]], complex)
fit = laplacian_soliton_fit(G2Structure(mu_from_matrix(AlmostAbelianSpec.from_complex(A))))
print(fit.residual, fit.note)
