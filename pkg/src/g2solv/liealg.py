"""Lie brackets on R^7 given by structure constants.

``c[i, j, k]`` is the e_k component of [e_i, e_j] (0-based).  The
Chevalley-Eilenberg differential follows the convention
(d a)(x, y) = -a([x, y]) on 1-forms, so for [e1, e2] = e3 one gets
d e^3 = -e^{12}.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import InputError
from .exterior import (
    DIM,
    KForm,
    interior_matrices,
    wedge_matrix,
)

__all__ = [
    "LieBracket",
    "AlmostAbelianSpec",
    "DerivationBasis",
    "RANK_RTOL",
    "JACOBI_TOL",
    "J6",
    "jacobi_residual",
    "structure_flags",
    "ce_differential",
    "ce_matrix",
    "derivations",
    "derivation_defect",
    "mu_from_matrix",
    "closedness_criterion",
    "spectral_type",
    "realify",
    "complexify",
]

RANK_RTOL = 1e-8
JACOBI_TOL = 1e-9

# complex structure on span{e1..e6}: J e1 = e2, J e3 = e4, J e5 = e6
J6 = np.kron(np.eye(3), np.array([[0.0, -1.0], [1.0, 0.0]]))


class LieBracket:
    """Antisymmetric structure-constant tensor on R^7.

    The constructor antisymmetrizes its input in the first two slots, so
    supplying only the i < j entries is enough.
    """

    __slots__ = ("c", "_d")

    def __init__(self, c):
        c = np.array(c, dtype=float)
        if c.shape != (DIM, DIM, DIM):
            raise InputError(f"structure constants must have shape (7, 7, 7), got {c.shape}")
        if not np.all(np.isfinite(c)):
            raise InputError("structure constants must be finite")
        upper = np.triu(np.ones((DIM, DIM), dtype=bool), 1)[:, :, None]
        c = np.where(upper, c, 0.0)
        c = c - c.transpose(1, 0, 2)
        c.setflags(write=False)
        self.c = c
        self._d = {}

    @classmethod
    def zero(cls) -> "LieBracket":
        return cls(np.zeros((DIM, DIM, DIM)))

    @classmethod
    def from_terms(cls, terms) -> "LieBracket":
        """From ``[(i, j, k, value), ...]`` meaning [e_i, e_j] += value e_k, 1-based."""
        c = np.zeros((DIM, DIM, DIM))
        for i, j, k, v in terms:
            if not all(1 <= n <= DIM for n in (i, j, k)):
                raise InputError(f"bracket index out of range: ({i}, {j}, {k})")
            if i == j:
                raise InputError(f"[e{i}, e{i}] must vanish")
            if i < j:
                c[i - 1, j - 1, k - 1] += v
            else:
                c[j - 1, i - 1, k - 1] -= v
        return cls(c)

    def to_terms(self, tol: float = 0.0):
        out = []
        for i in range(DIM):
            for j in range(i + 1, DIM):
                for k in range(DIM):
                    if abs(self.c[i, j, k]) > tol:
                        out.append((i + 1, j + 1, k + 1, float(self.c[i, j, k])))
        return out

    def __repr__(self):
        return f"LieBracket({len(self.to_terms(1e-14))} nonzero constants)"

    def norm(self) -> float:
        """|mu| with |mu|^2 = sum over i < j and k of c[i, j, k]^2."""
        return float(np.sqrt(np.sum(np.triu(np.ones((DIM, DIM)), 1)[:, :, None] * self.c ** 2)))

    def normalized(self) -> "LieBracket":
        n = self.norm()
        return self if n == 0 else self.scaled(1.0 / n)

    def scaled(self, s: float) -> "LieBracket":
        return LieBracket(s * self.c)

    def __add__(self, other):
        return LieBracket(self.c + other.c)

    def bracket(self, x, y) -> np.ndarray:
        return np.einsum("i,j,ijk->k", x, y, self.c)

    def ad(self, x) -> np.ndarray:
        """Matrix of ad x; column j is [x, e_j]."""
        return np.einsum("i,ijk->kj", np.asarray(x, dtype=float), self.c)

    def ad_matrices(self) -> np.ndarray:
        """Stack ``ad[i]`` = ad e_i."""
        return self.c.transpose(0, 2, 1)

    def act(self, h) -> "LieBracket":
        """h.mu = h mu(h^{-1}., h^{-1}.)."""
        h = np.asarray(h, dtype=float)
        hi = np.linalg.inv(h)
        return LieBracket(np.einsum("ai,bj,abl,kl->ijk", hi, hi, self.c, h))

    def is_zero(self, tol: float = 0.0) -> bool:
        return bool(np.max(np.abs(self.c)) <= tol)


@dataclass(frozen=True)
class DerivationBasis:
    """Orthonormal (Frobenius) basis of Der(mu)."""

    basis: np.ndarray  # shape (dim, 7, 7)
    singular_values: np.ndarray
    gap_ratio: float
    ill_conditioned: bool = False

    @property
    def dim(self) -> int:
        return self.basis.shape[0]

    def __len__(self):
        return self.dim

    def __iter__(self):
        return iter(self.basis)

    def contains(self, D, tol: float = 1e-9) -> bool:
        """Whether D lies in the span, up to ``tol`` relative to |D|."""
        D = np.asarray(D, dtype=float).reshape(-1)
        B = self.basis.reshape(self.dim, -1)
        resid = D - B.T @ (B @ D)
        return bool(np.linalg.norm(resid) <= tol * max(1.0, np.linalg.norm(D)))


def jacobi_residual(mu: LieBracket) -> float:
    """Frobenius norm of the cyclic sum [[e_i, e_j], e_k] + cyclic."""
    c = mu.c
    # t[i, j, k, m] = component m of [[e_i, e_j], e_k]
    t = np.einsum("ijl,lkm->ijkm", c, c)
    jac = t + t.transpose(1, 2, 0, 3) + t.transpose(2, 0, 1, 3)
    return float(np.linalg.norm(jac))


def _check_lie(mu: LieBracket, tol: float = JACOBI_TOL):
    scale = max(mu.norm(), 1e-300) ** 2
    r = jacobi_residual(mu)
    if r > tol * max(scale, 1.0):
        raise InputError(f"bracket fails the Jacobi identity (residual {r:.3e})")


def _span(vectors, rtol=RANK_RTOL, scale=1.0) -> np.ndarray:
    """Orthonormal basis (rows) of the span of the given rows.

    Singular values below rtol * max(largest, scale) count as zero, so a
    set of pure roundoff vectors spans nothing.
    """
    if len(vectors) == 0:
        return np.zeros((0, DIM))
    M = np.asarray(vectors)
    u, s, vt = np.linalg.svd(M, full_matrices=False)
    if s.size == 0 or s[0] <= 1e-300:
        return np.zeros((0, DIM))
    r = int(np.sum(s > rtol * max(s[0], scale)))
    return vt[:r]


def _brackets_of(mu, U, V):
    return [mu.bracket(u, v) for u in U for v in V]


def structure_flags(mu: LieBracket, tol: float = JACOBI_TOL) -> dict:
    """Solvable / nilpotent / unimodular flags via derived and lower central series.

    Ranks are decided on the |mu| = 1 normalization with a relative
    singular-value threshold.
    """
    _check_lie(mu, tol)
    m = mu.normalized()
    full = np.eye(DIM)

    def series(step):
        cur = full
        for _ in range(DIM + 1):
            nxt = _span(step(cur))
            if nxt.shape[0] == 0:
                return True
            if nxt.shape[0] == cur.shape[0]:
                return False
            cur = nxt
        return False

    solvable = series(lambda U: _brackets_of(m, U, U))
    nilpotent = series(lambda U: _brackets_of(m, full, U))
    traces = np.einsum("ikk->i", m.c)
    return {
        "solvable": bool(solvable),
        "nilpotent": bool(nilpotent),
        "unimodular": bool(np.max(np.abs(traces)) <= tol),
    }


def _d1_forms(mu: LieBracket) -> np.ndarray:
    """Coefficients of d e^l as 2-forms, stacked (7, 21)."""
    iu, ju = np.triu_indices(DIM, 1)
    # combos(2) are in the same lexicographic order as triu_indices
    return -mu.c[iu, ju, :].T


def ce_matrix(mu: LieBracket, k: int) -> np.ndarray:
    """Matrix of d_mu from k-forms to (k+1)-forms.

    Uses d a = sum_l (d e^l) ^ i_{e_l} a, valid because both sides are
    antiderivations of degree +1 that agree on 1-forms.
    """
    if k in mu._d:
        return mu._d[k]
    if k >= DIM:
        M = np.zeros((0, 1))
    elif k == 0:
        M = np.zeros((DIM, 1))
    else:
        de = _d1_forms(mu)
        I = interior_matrices(k)
        M = sum(wedge_matrix(KForm(2, de[l]), k - 1) @ I[l] for l in range(DIM))
    M.setflags(write=False)
    mu._d[k] = M
    return M


def ce_differential(mu: LieBracket, a: KForm) -> KForm:
    """Chevalley-Eilenberg differential d_mu a."""
    if a.degree == DIM:
        return KForm(DIM, vanishes_by_degree=True)
    return KForm(a.degree + 1, ce_matrix(mu, a.degree) @ a.coeffs)


def _derivation_system(mu: LieBracket) -> np.ndarray:
    """Linear map vec(D) -> (D[e_i,e_j] - [De_i,e_j] - [e_i,De_j]) for i < j.

    vec is row-major: D[a, b] sits at index 7 a + b.
    """
    c = mu.c
    eye = np.eye(DIM)
    iu, ju = np.triu_indices(DIM, 1)
    # term1[i,j,k ; a,b] = d/dD[a,b] of (D c[i,j,:])_k = delta_ka c[i,j,b]
    t1 = np.einsum("ka,ijb->ijkab", eye, c)
    # [De_i, e_j]_k = sum_m D[m,i] c[m,j,k]  -> delta_ib c[a,j,k]
    t2 = np.einsum("ib,ajk->ijkab", eye, c)
    # [e_i, De_j]_k = sum_m D[m,j] c[i,m,k] -> delta_jb c[i,a,k]
    t3 = np.einsum("jb,iak->ijkab", eye, c)
    t = (t1 - t2 - t3)[iu, ju]
    return t.reshape(len(iu) * DIM, DIM * DIM)


def derivation_defect(mu: LieBracket, D) -> float:
    """Max abs entry of D[x,y] - [Dx,y] - [x,Dy] over basis pairs."""
    return float(np.max(np.abs(_derivation_system(mu) @ np.asarray(D, dtype=float).reshape(-1))))


def derivations(mu: LieBracket, tol: float = JACOBI_TOL) -> DerivationBasis:
    """Basis of Der(mu) from the SVD nullspace of the derivation system.

    Singular values below 1e-8 times the largest (computed on |mu| = 1)
    count as zero.  ``ill_conditioned`` is set when the two singular values
    straddling the threshold are within a factor of 10.
    """
    _check_lie(mu, tol)
    m = mu.normalized()
    S = _derivation_system(m)
    _, s, vt = np.linalg.svd(S, full_matrices=True)
    sv = np.zeros(DIM * DIM)
    sv[: s.size] = s
    smax = sv[0]
    if smax <= 1e-300:
        return DerivationBasis(np.eye(DIM * DIM).reshape(-1, DIM, DIM), sv, np.inf)
    rank = int(np.sum(sv > RANK_RTOL * smax))
    null = vt[rank:]
    lo = sv[rank] if rank < sv.size else 0.0
    hi = sv[rank - 1]
    gap = np.inf if lo == 0 else hi / lo
    ill = bool(gap < 10)
    if ill:
        warnings.warn(f"derivation rank decision is ill-conditioned (gap ratio {gap:.3g})")
    return DerivationBasis(null.reshape(-1, DIM, DIM), sv, float(gap), ill)


# ---------------------------------------------------------------------------
# almost-abelian brackets

def realify(A) -> np.ndarray:
    """3x3 complex -> 6x6 real; a + bi becomes the block [[a, -b], [b, a]]."""
    A = np.asarray(A, dtype=complex)
    if A.shape != (3, 3):
        raise InputError("expected a 3x3 complex matrix")
    R = np.zeros((6, 6))
    R[0::2, 0::2] = A.real
    R[0::2, 1::2] = -A.imag
    R[1::2, 0::2] = A.imag
    R[1::2, 1::2] = A.real
    return R


def complexify(R, tol: float = 1e-12) -> Optional[np.ndarray]:
    """Inverse of :func:`realify`, or None if R does not commute with J."""
    R = np.asarray(R, dtype=float)
    if np.max(np.abs(R @ J6 - J6 @ R)) > tol * max(1.0, np.max(np.abs(R))):
        return None
    return R[0::2, 0::2] + 1j * R[1::2, 0::2]


@dataclass(frozen=True)
class AlmostAbelianSpec:
    """Matrix A = ad e7 restricted to span{e1..e6}.

    ``real6`` is always populated; ``supplied`` records whether the caller
    gave the complex 3x3 or the real 6x6 form.
    """

    real6: np.ndarray
    supplied: str = "real"
    _complex: Optional[np.ndarray] = field(default=None, repr=False, compare=False)

    @classmethod
    def from_complex(cls, A) -> "AlmostAbelianSpec":
        A = np.asarray(A, dtype=complex)
        if not np.all(np.isfinite(A)):
            raise InputError("matrix entries must be finite")
        return cls(realify(A), "complex", A.copy())

    @classmethod
    def from_real(cls, R) -> "AlmostAbelianSpec":
        R = np.array(R, dtype=float)
        if R.shape != (6, 6):
            raise InputError("expected a 6x6 real matrix")
        if not np.all(np.isfinite(R)):
            raise InputError("matrix entries must be finite")
        return cls(R, "real")

    @property
    def complex3(self) -> Optional[np.ndarray]:
        """The complex 3x3 form, or None when A is not J-linear."""
        if self._complex is not None:
            return self._complex
        return complexify(self.real6)

    @property
    def is_complex_linear(self) -> bool:
        return self.complex3 is not None


def mu_from_matrix(spec) -> LieBracket:
    """mu_A: n = span{e1..e6} abelian, [e7, x] = A x for x in n."""
    if not isinstance(spec, AlmostAbelianSpec):
        spec = AlmostAbelianSpec.from_real(spec)
    c = np.zeros((DIM, DIM, DIM))
    c[6, :6, :6] = spec.real6.T
    c[:6, 6, :6] = -spec.real6.T
    return LieBracket(c)


def closedness_criterion(spec: AlmostAbelianSpec, check: bool = True, tol: float = 1e-9) -> dict:
    """Closed iff A is in sl(3, C); torsion-free iff A is in su(3).

    With ``check=True`` the answer is compared against d_mu phi and
    d_mu *phi computed directly; a mismatch raises InconsistencyError.
    """
    from .errors import InconsistencyError
    from .g2core import PHI, PSI

    R = spec.real6
    scale = max(1.0, np.max(np.abs(R)))
    commutes = np.max(np.abs(R @ J6 - J6 @ R)) <= tol * scale
    closed = False
    tf = False
    if commutes:
        A = complexify(R, tol=np.inf)
        closed = abs(np.trace(A)) <= tol * scale
        tf = closed and np.max(np.abs(A + A.conj().T)) <= tol * scale
    out = {"closed": bool(closed), "torsion_free": bool(tf)}
    if check:
        mu = mu_from_matrix(spec)
        n = max(mu.norm(), 1e-300)
        d_closed = ce_differential(mu, PHI).norm() <= 1e3 * tol * n
        d_tf = d_closed and ce_differential(mu, PSI).norm() <= 1e3 * tol * n
        if (d_closed, d_tf) != (closed, tf):
            raise InconsistencyError(
                f"matrix criterion {out} disagrees with direct differential test "
                f"(closed={d_closed}, torsion_free={d_tf})"
            )
    return out


def spectral_type(spec, tol: float = 1e-8, seed: int = 0) -> dict:
    """Imaginary / real type from the eigenvalues of A.

    For an almost-abelian bracket Spec(ad X) = {0} u x_7 Spec(A), so the
    classification is exact here.  ``borderline`` marks eigenvalues that are
    nonzero but within ``tol`` of the imaginary axis.
    """
    if isinstance(spec, LieBracket):
        return _spectral_type_sampled(spec, tol, seed=seed)
    R = spec.real6
    ev = np.linalg.eigvals(R)
    scale = max(1.0, np.max(np.abs(ev)))
    nilpotent = bool(
        np.max(np.abs(np.linalg.matrix_power(R, 6))) <= tol * max(1.0, np.max(np.abs(R))) ** 6
    )
    re = np.abs(ev.real)
    imaginary = bool(np.all(re <= tol * scale))
    borderline = bool(np.any((re > 0) & (re <= tol * scale) & (np.abs(ev) > tol * scale)))
    return {
        "imaginary_type": imaginary or nilpotent,
        "real_type": nilpotent or not imaginary,
        "nilpotent": nilpotent,
        "borderline": borderline,
        "eigenvalues": ev,
    }


def _spectral_type_sampled(mu: LieBracket, tol: float, samples: int = 64, seed: int = 0) -> dict:
    """Heuristic: sample ad X for random X.  Not a certificate."""
    rng = np.random.default_rng(seed)
    m = mu.normalized()
    all_imag = True
    all_real = True
    X = np.vstack([np.eye(DIM), rng.standard_normal((samples, DIM))])
    for x in X:
        ad = m.ad(x)
        ev = np.linalg.eigvals(ad)
        off = bool(np.any(np.abs(ev.real) > tol))
        nil = bool(np.max(np.abs(np.linalg.matrix_power(ad, DIM))) <= tol)
        all_imag &= not off
        all_real &= nil or off
    nilpotent = structure_flags(mu)["nilpotent"]
    return {
        "imaginary_type": all_imag,
        "real_type": nilpotent or all_real,
        "nilpotent": nilpotent,
        "borderline": False,
        "heuristic": True,
    }
