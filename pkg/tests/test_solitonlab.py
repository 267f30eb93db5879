import numpy as np
import pytest

from conftest import random_gl7, random_normal_sl3c, random_sl3c
from g2solv.curvature import pinching_F
from g2solv.errors import NotClosedError
from g2solv.exterior import gl_pullback
from g2solv.families import catalog
from g2solv.g2core import PHI, G2Structure
from g2solv.liealg import AlmostAbelianSpec, derivation_defect, mu_from_matrix
from g2solv.solitonlab import eigenform_fit, laplacian_soliton_fit


def aa(A):
    return G2Structure(mu_from_matrix(AlmostAbelianSpec.from_complex(A)))


def test_normal_matrices_are_solitons():
    rng = np.random.default_rng(7)
    for _ in range(20):
        fit = laplacian_soliton_fit(aa(random_normal_sl3c(rng)))
        assert fit.residual <= 1e-7
        assert fit.kind == "expanding"


@pytest.mark.parametrize("t", [0.3, 0.7, 1.2])
def test_B_t_solitons(t):
    fit = laplacian_soliton_fit(G2Structure(mu_from_matrix(catalog("B_t", t=t))))
    assert fit.residual <= 1e-7 and fit.kind == "expanding"


def test_fitted_D_is_derivation():
    g = aa(np.array([[0, 1, 0], [0, 0, 0], [0, 0, 0]], complex))
    fit = laplacian_soliton_fit(g)
    assert fit.residual <= 1e-10
    mu = g.mu.normalized()
    assert derivation_defect(mu, fit.D) <= 1e-9


def test_mu6_soliton_location():
    """With these conventions the Laplacian soliton of the printed curve sits
    at a = 1/sqrt(2); F is symmetric under a -> 1/a, so F there is 3/4."""
    s = 1 / np.sqrt(2)
    g = G2Structure(mu_from_matrix(catalog("mu6", a=s)))
    fit = laplacian_soliton_fit(g)
    assert fit.residual <= 1e-10
    assert abs(pinching_F(g.mu).F - 0.75) <= 1e-12
    for a in (0.5, 1.0, 2.0):
        assert laplacian_soliton_fit(G2Structure(mu_from_matrix(catalog("mu6", a=a)))).residual > 1e-3
    # transposed parametrization [[0, 0, 0], [a, 0, 0], [0, 1, 0]] has it at a = sqrt(2)
    At = np.array([[0, 0, 0], [np.sqrt(2), 0, 0], [0, 1, 0]], complex)
    assert laplacian_soliton_fit(aa(At)).residual <= 1e-10


def test_non_normal_semisimple_is_not_soliton():
    fit = laplacian_soliton_fit(aa(np.array([[1, 1, 0], [0, -1, 0], [0, 0, 0]], complex)))
    assert fit.residual > 1e-3 and fit.kind == "none"
    assert "not an algebraic soliton" in fit.note


def test_fit_invariant_under_equivalence():
    rng = np.random.default_rng(3)
    A = random_sl3c(rng)
    g = aa(A)
    h = random_gl7(rng)
    g2 = G2Structure(g.mu.act(h), gl_pullback(h, PHI))
    a, b = laplacian_soliton_fit(g), laplacian_soliton_fit(g2)
    assert abs(a.residual - b.residual) <= 1e-8
    assert abs(a.c - b.c) <= 1e-8 * max(1.0, abs(a.c))


def test_needs_closed():
    with pytest.raises(NotClosedError):
        laplacian_soliton_fit(G2Structure(catalog("mu_hyp")))


def test_eigenform():
    ef = eigenform_fit(G2Structure(catalog("zero")))
    assert ef.residual == 0.0
    assert eigenform_fit(G2Structure(catalog("mu_hyp"))).residual > 1e-3
    # closed eigenforms would need d tau = c phi, impossible unless torsion-free
    assert eigenform_fit(aa(random_sl3c(np.random.default_rng(0)))).residual > 1e-3
