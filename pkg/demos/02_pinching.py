# %% [markdown]
# # The pinching functional F = scal^2 / |Ric|^2
#
# For closed structures on almost-abelian groups mu_A (A in sl(3, C)) F has
# a closed form in terms of the hermitian part H of A and [A, A*].  The
# curvature pipeline computes F from the full Riemann tensor instead; both
# must agree.

# %%
import numpy as np

from g2solv import F_almost_abelian, pinching_F
from g2solv.families import catalog, family, scan
from g2solv.liealg import AlmostAbelianSpec, mu_from_matrix

rng = np.random.default_rng(0)
A = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
A -= np.trace(A) / 3 * np.eye(3)
spec = catalog("normal_form_1", theta=0.2, beta_re=0.1, beta_im=0.4)
for M in (A, spec.complex3):
    s = AlmostAbelianSpec.from_complex(M)
    print(pinching_F(mu_from_matrix(s)).F, F_almost_abelian(s))

# %% [markdown]
# The one-parameter curve on the 3-step nilpotent group: a single critical
# point, the maximum 4/5 at a = 1.

# %%
res = scan("mu6", {"a": np.linspace(0.25, 3, 12)}, classes=False)
for r in res:
    print(f"a={r.params['a']:.3f}  F={r.F:.6f}  formula={r.printed_F:.6f}")
print("grid sup:", res.F_sup, "at", res.argmax)

# %% [markdown]
# Families that degenerate to torsion-free or nilpotent limits.  F of D_t
# measured by the pipeline is t^2/(2t^2 + (a-b)^2), which differs from the
# stored printed formula t^2/(t^2 + (a-b)^2); tests/test_families.py carries
# the hand derivation from the closed form of F.

# %%
for t in (0.1, 0.5, 1.0):
    D = catalog("D_t", a=1, b=0, t=t)
    print(f"t={t}: A_t {pinching_F(mu_from_matrix(catalog('A_t', t=t))).F:.5f}"
          f"  C_t {pinching_F(mu_from_matrix(catalog('C_t', t=t))).F:.5f}"
          f"  D_t {pinching_F(mu_from_matrix(D)).F:.5f}"
          f" (printed {family('D_t').printed_F(1, 0, t):.5f})")

# %% [markdown]
# Outside the closed world: the Heisenberg factor gives 1/3, real
# hyperbolic space is Einstein with the maximal value 7.

# %%
print(pinching_F(catalog("mu_heis")).F, pinching_F(catalog("mu_hyp")).F)
