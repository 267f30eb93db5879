import numpy as np
import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from conftest import (
    random_almost_abelian,
    random_gl7,
    random_semidirect,
    random_sl3c,
    random_solvable,
    random_two_step,
)
from g2solv.errors import InconsistencyError, InputError
from g2solv.exterior import KForm, basis_form, gl_pullback
from g2solv.families import catalog
from g2solv.g2core import PHI, PSI
from g2solv.liealg import (
    AlmostAbelianSpec,
    LieBracket,
    ce_differential,
    ce_matrix,
    closedness_criterion,
    complexify,
    derivation_defect,
    derivations,
    jacobi_residual,
    mu_from_matrix,
    realify,
    spectral_type,
    structure_flags,
)
from math import comb

seeds = st.integers(0, 2**32 - 1)


def test_differential_sign_convention():
    mu = LieBracket.from_terms([(1, 2, 3, 1.0)])
    assert ce_differential(mu, basis_form("3")).to_dict() == {"12": -1.0}
    assert ce_differential(mu, basis_form("1")).is_zero()


def test_terms_roundtrip():
    terms = [(1, 2, 3, 1.5), (1, 7, 1, -2.0), (2, 7, 2, 0.5)]
    mu = LieBracket.from_terms(terms)
    assert sorted(mu.to_terms()) == sorted(terms)
    assert np.allclose(mu.bracket(np.eye(7)[1], np.eye(7)[0]), -1.5 * np.eye(7)[2])


def test_bad_shapes_rejected():
    with pytest.raises(InputError):
        LieBracket(np.zeros((6, 6, 6)))
    with pytest.raises(InputError):
        LieBracket(np.full((7, 7, 7), np.inf))


@given(seeds)
def test_d_squared_vanishes(seed):
    rng = np.random.default_rng(seed)
    mu = random_solvable(rng)
    assert jacobi_residual(mu) < 1e-9 * max(1.0, mu.norm() ** 2)
    for k in range(6):
        dd = ce_matrix(mu, k + 1) @ ce_matrix(mu, k)
        assert np.max(np.abs(dd), initial=0) <= 1e-10 * max(1.0, mu.norm() ** 2)


def test_jacobi_violation_grows_linearly():
    rng = np.random.default_rng(3)
    mu = random_semidirect(rng)
    bump = np.zeros((7, 7, 7))
    bump[0, 1, 2] = 1.0  # [e1, e2] gets an e3 component
    sizes = []
    for delta in (1e-3, 1e-2):
        nu = LieBracket(mu.c + delta * bump)
        dd = max(np.linalg.norm(ce_matrix(nu, k + 1) @ ce_matrix(nu, k)) for k in range(6))
        sizes.append(dd)
        assert jacobi_residual(nu) > 0
    assert sizes[0] > 0
    assert 5 < sizes[1] / sizes[0] < 20


def test_d_is_equivariant():
    rng = np.random.default_rng(5)
    mu = random_solvable(rng)
    h = random_gl7(rng)
    a = KForm(2, rng.standard_normal(21))
    lhs = ce_differential(mu.act(h), gl_pullback(h, a))
    rhs = gl_pullback(h, ce_differential(mu, a))
    assert lhs.allclose(rhs, 1e-9)


def test_structure_flags_examples():
    heis = catalog("mu_heis")
    f = structure_flags(heis)
    assert f["nilpotent"] and f["solvable"] and f["unimodular"]
    f = structure_flags(catalog("mu_hyp"))
    assert f["solvable"] and not f["nilpotent"] and not f["unimodular"]
    f = structure_flags(mu_from_matrix(catalog("B_t", t=0.5)))
    assert f["solvable"] and not f["nilpotent"] and f["unimodular"]
    # sl(2, R) + R^4 is not solvable
    sl2 = LieBracket.from_terms([(1, 2, 3, 1.0), (3, 1, 1, 2.0), (3, 2, 2, -2.0)])
    assert not structure_flags(sl2)["solvable"]
    bad = LieBracket.from_terms([(1, 2, 3, 1.0), (1, 3, 1, 1.0), (2, 3, 2, 1.0)])
    with pytest.raises(InputError):
        structure_flags(bad)


def _sympy_der_dim(mu):
    """Exact dimension of Der(mu) for a bracket with integer constants."""
    c = np.rint(mu.c).astype(int)
    D = sympy.Matrix(7, 7, lambda i, j: sympy.Symbol(f"d{i}{j}"))
    eqs = []
    for i in range(7):
        for j in range(i + 1, 7):
            lhs = D * sympy.Matrix(c[i, j])
            Di, Dj = D[:, i], D[:, j]
            rhs = sum((Di[l] * sympy.Matrix(c[l, j]) for l in range(7)), sympy.zeros(7, 1)) + \
                sum((Dj[l] * sympy.Matrix(c[i, l]) for l in range(7)), sympy.zeros(7, 1))
            eqs.extend(list(lhs - rhs))
    syms = list(D)
    M, _ = sympy.linear_eq_to_matrix(eqs, syms)
    return 49 - M.rank()


@pytest.mark.parametrize("name", ["mu_heis", "mu_hyp", "zero", "mu6_int", "mu2_int"])
def test_derivation_dimension_matches_exact(name):
    if name == "mu6_int":
        mu = mu_from_matrix(catalog("mu6", a=1.0))
    elif name == "mu2_int":
        mu = mu_from_matrix(catalog("mu2"))
    else:
        mu = catalog(name)
    der = derivations(mu)
    assert der.dim == _sympy_der_dim(mu)
    for D in der.basis:
        assert derivation_defect(mu, D) <= 1e-9


@given(seeds)
def test_derivations_satisfy_identity(seed):
    rng = np.random.default_rng(seed)
    mu = random_solvable(rng)
    der = derivations(mu)
    for D in der.basis:
        assert derivation_defect(mu, D) <= 1e-9 * max(1.0, mu.norm())
    # ad x is always a derivation
    x = rng.standard_normal(7)
    assert der.contains(mu.ad(x), tol=1e-7)


def test_bracket_norm_convention():
    rng = np.random.default_rng(0)
    A = rng.standard_normal((6, 6))
    mu = mu_from_matrix(AlmostAbelianSpec.from_real(A))
    # sum over i < j of |[e_i, e_j]|^2: each entry of A appears once
    assert abs(mu.norm() ** 2 - np.sum(A * A)) < 1e-12
    assert abs(np.sum(mu.c ** 2) - 2 * np.sum(A * A)) < 1e-12


def test_realify_roundtrip():
    rng = np.random.default_rng(1)
    A = random_sl3c(rng)
    R = realify(A)
    assert np.allclose(complexify(R), A)
    assert np.allclose(realify(A @ A), R @ R)
    assert complexify(rng.standard_normal((6, 6))) is None


def test_closedness_criterion_agrees_with_direct_test():
    rng = np.random.default_rng(11)
    counts = {"closed": 0, "torsion_free": 0, "open": 0}
    for n in range(1000):
        kind = n % 4
        if kind == 0:
            spec = AlmostAbelianSpec.from_real(rng.standard_normal((6, 6)))
        elif kind == 1:
            spec = AlmostAbelianSpec.from_complex(random_sl3c(rng))
        elif kind == 2:
            X = random_sl3c(rng)
            spec = AlmostAbelianSpec.from_complex(0.5 * (X - X.conj().T))
        else:
            X = random_sl3c(rng) + (rng.standard_normal() + 1j * rng.standard_normal()) * np.eye(3)
            spec = AlmostAbelianSpec.from_complex(X)
        res = closedness_criterion(spec, check=False)
        mu = mu_from_matrix(spec)
        closed = ce_differential(mu, PHI).norm() <= 1e-9 * mu.norm()
        tf = closed and ce_differential(mu, PSI).norm() <= 1e-9 * mu.norm()
        assert (res["closed"], res["torsion_free"]) == (closed, tf)
        closedness_criterion(spec, check=True)  # would raise on mismatch
        counts["torsion_free" if tf else "closed" if closed else "open"] += 1
    assert min(counts.values()) >= 200


def test_spectral_types():
    st_a = spectral_type(catalog("A_t", t=0.5))
    assert st_a["imaginary_type"] and not st_a["real_type"]
    st_b = spectral_type(catalog("B_t", t=0.5))
    assert st_b["real_type"] and not st_b["imaginary_type"]
    st_n = spectral_type(catalog("mu2"))
    assert st_n["real_type"] and st_n["imaginary_type"] and st_n["nilpotent"]
    eps = AlmostAbelianSpec.from_complex(np.diag([1j + 1e-10, -1j - 1e-10, 0]))
    assert spectral_type(eps)["borderline"]


def test_sampled_spectral_type_is_flagged():
    out = spectral_type(catalog("mu_heis"))
    assert out["heuristic"] and out["real_type"] and out["imaginary_type"]
    out = spectral_type(catalog("mu_hyp"))
    assert out["real_type"] and not out["imaginary_type"]


def test_action_preserves_lie():
    rng = np.random.default_rng(9)
    for gen in (random_almost_abelian, random_two_step, random_semidirect):
        mu = gen(rng)
        nu = mu.act(random_gl7(rng))
        assert jacobi_residual(nu) < 1e-9 * max(1.0, nu.norm() ** 2)
        assert structure_flags(nu)["solvable"]
