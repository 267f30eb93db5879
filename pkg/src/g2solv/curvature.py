"""Riemannian curvature of (S_mu, <,>) with the basis e_i orthonormal.

Two independent Ricci routes: a brute-force one through the Koszul
connection and the full curvature tensor, and the closed formula

    Ric = M - B/2 - S(ad H)

with M the moment-map term, B the Killing form and H the mean curvature
vector (<H, x> = tr ad x).  ``ricci`` runs both and refuses to answer
when they disagree.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import InconsistencyError, InputError
from .exterior import DIM
from .liealg import (
    AlmostAbelianSpec,
    LieBracket,
    derivations,
    mu_from_matrix,
)

__all__ = [
    "RicciData",
    "PinchReport",
    "SolitonResidual",
    "levi_civita",
    "riemann_tensor",
    "ricci_oracle",
    "ricci_closed_form",
    "ricci",
    "pinching_F",
    "F_almost_abelian",
    "einstein_residual",
    "ricci_soliton_residual",
    "solvsoliton_check_aa",
    "is_flat",
]

DUAL_ROUTE_TOL = 1e-9


@dataclass(frozen=True)
class RicciData:
    ric: np.ndarray
    scal: float
    ric_norm2: float
    riemann: Optional[np.ndarray] = field(default=None, repr=False)

    @classmethod
    def from_ric(cls, ric, riemann=None):
        ric = 0.5 * (ric + ric.T)
        return cls(ric, float(np.trace(ric)), float(np.sum(ric * ric)), riemann)

    @property
    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.ric)


def levi_civita(mu: LieBracket) -> np.ndarray:
    """Gamma[i, j, k] = <nabla_{e_i} e_j, e_k> from the Koszul formula."""
    c = mu.c
    return 0.5 * (c - np.einsum("jki->ijk", c) + np.einsum("kij->ijk", c))


def riemann_tensor(mu: LieBracket) -> np.ndarray:
    """R[a, b] = matrix of R(e_a, e_b) = [nabla_a, nabla_b] - nabla_[a,b]."""
    G = levi_civita(mu)
    N = G.transpose(0, 2, 1)  # N[i][k, j] = Gamma[i, j, k], so N[i] @ e_j = nabla_i e_j
    NN = np.einsum("akl,blm->abkm", N, N)
    return NN - NN.transpose(1, 0, 2, 3) - np.einsum("abl,lkm->abkm", mu.c, N)


def ricci_oracle(mu: LieBracket) -> RicciData:
    """ric(x, y) = sum_i <R(e_i, x) y, e_i>, from the full curvature tensor."""
    R = riemann_tensor(mu)
    # R[i, x][i, y] is the e_i component of R(e_i, x) e_y
    ric = np.einsum("ixiy->xy", R)
    return RicciData.from_ric(ric, R)


def ricci_closed_form(mu: LieBracket) -> RicciData:
    c = mu.c
    ad = mu.ad_matrices()  # ad[x][k, i] = c[x, i, k]
    # -1/2 sum_i <[x, e_i], [y, e_i]>
    t1 = -0.5 * np.einsum("xik,yik->xy", c, c)
    # +1/4 sum_ij <[e_i, e_j], x><[e_i, e_j], y>
    t2 = 0.25 * np.einsum("ijx,ijy->xy", c, c)
    killing = np.einsum("xab,yba->xy", ad, ad)
    H = np.einsum("ikk->i", c)
    adH = np.einsum("i,ikj->kj", H, ad)
    ric = t1 + t2 - 0.5 * killing - 0.5 * (adH + adH.T)
    return RicciData.from_ric(ric)


def ricci(mu: LieBracket, tol: float = DUAL_ROUTE_TOL) -> RicciData:
    """Ricci data from the Koszul route, cross-checked against the closed formula."""
    a = ricci_oracle(mu)
    b = ricci_closed_form(mu)
    dev = float(np.max(np.abs(a.ric - b.ric)))
    if dev > tol * max(1.0, mu.norm() ** 2):
        raise InconsistencyError(f"Ricci routes disagree by {dev:.3e}")
    return a


def is_flat(mu: LieBracket, tol: float = 1e-9) -> bool:
    """Full Riemann tensor vanishes (relative to |mu|^2)."""
    R = riemann_tensor(mu)
    return bool(np.linalg.norm(R) <= tol * max(mu.norm() ** 2, 1e-300))


@dataclass(frozen=True)
class PinchReport:
    """F = scal^2 / |Ric|^2; ``F`` is None on flat brackets.

    The extremal-value fields (inf/sup estimates over orbits) are left
    empty here and filled by scans.
    """

    F: Optional[float]
    flat: bool
    scal: float
    ric_norm2: float
    bounds: dict = field(default_factory=lambda: {"lower": 0.0, "upper": float(DIM)})
    estimates: dict = field(default_factory=dict)


def pinching_F(mu: LieBracket, tol: float = 1e-9) -> PinchReport:
    m = mu.normalized()
    rd = ricci(m)
    if np.sqrt(rd.ric_norm2) <= tol:
        return PinchReport(None, True, rd.scal, rd.ric_norm2)
    F = rd.scal ** 2 / rd.ric_norm2
    return PinchReport(float(F), False, rd.scal, rd.ric_norm2)


def _hnorm2(B):
    return float(np.real(np.trace(B @ B.conj().T)))


def F_almost_abelian(spec, variant: str = "closed", tol: float = 1e-9) -> float:
    """Closed-form F for mu_A.

    variant
        ``"closed"``: A in sl(3, C), F = |H|^4 / (|H|^4 + |[A, A*]|^2 / 8)
        with H the hermitian part and complex norms |B|^2 = tr B B*.
        ``"unimodular"``: real 6x6 A with tr A = 0,
        F = (tr S^2)^2 / ((tr S^2)^2 + |[A, A^t]|^2 / 4), S the symmetric part.
        ``"bound"``: the upper bound 1 + (tr A)^2 / tr S^2 for any real A.
        ``"riemannian"``: exact F for any real A from
        Ric|_n = [A, A^t]/2 - (tr A) S, Ric(e7, e7) = -tr S^2.
    """
    if not isinstance(spec, AlmostAbelianSpec):
        spec = AlmostAbelianSpec.from_real(spec)
    R = spec.real6
    scale = max(1.0, np.max(np.abs(R)))
    if variant == "closed":
        A = spec.complex3
        if A is None:
            raise InputError("closed variant needs A commuting with J (A in gl(3, C))")
        if abs(np.trace(A)) > tol * scale:
            raise InputError("closed variant needs A in sl(3, C): complex trace is nonzero")
        H = 0.5 * (A + A.conj().T)
        h4 = _hnorm2(H) ** 2
        comm = A @ A.conj().T - A.conj().T @ A
        den = h4 + _hnorm2(comm) / 8.0
        if den == 0:
            raise InputError("F is undefined: A is zero")
        return h4 / den
    S = 0.5 * (R + R.T)
    trS2 = float(np.trace(S @ S))
    trA = float(np.trace(R))
    if variant == "bound":
        if trS2 == 0:
            raise InputError("bound undefined for skew-symmetric A")
        return 1.0 + trA ** 2 / trS2
    comm = R @ R.T - R.T @ R
    if variant == "unimodular":
        if abs(trA) > tol * scale:
            raise InputError("unimodular variant needs tr A = 0")
        den = trS2 ** 2 + 0.25 * float(np.sum(comm * comm))
        if den == 0:
            raise InputError("F is undefined: mu_A is flat")
        return trS2 ** 2 / den
    if variant == "riemannian":
        ric_n = 0.5 * comm - trA * S
        scal = -trS2 - trA ** 2
        norm2 = float(np.sum(ric_n * ric_n)) + trS2 ** 2
        if norm2 == 0:
            raise InputError("F is undefined: mu_A is flat")
        return scal ** 2 / norm2
    raise InputError(f"unknown variant {variant!r}")


def einstein_residual(mu: LieBracket) -> float:
    """|Ric - (scal/7) I| / |Ric|; zero for flat brackets."""
    rd = ricci(mu)
    n = np.sqrt(rd.ric_norm2)
    if n <= 1e-12 * max(mu.norm() ** 2, 1e-300):
        return 0.0
    return float(np.linalg.norm(rd.ric - rd.scal / DIM * np.eye(DIM)) / n)


@dataclass(frozen=True)
class SolitonResidual:
    c: float
    D: np.ndarray
    residual: float
    symmetric_defect: float
    condition: float


def ricci_soliton_residual(mu: LieBracket) -> SolitonResidual:
    """Least-squares fit of Ric = c I + D over c and D in Der(mu).

    Works on |mu| = 1.  The residual is |Ric - cI - D| / |Ric| (absolute on
    flat brackets).  ``symmetric_defect`` is |D - D^t| / |D| for the fitted D;
    an exact solvsoliton has a symmetric derivation.
    """
    m = mu.normalized()
    rd = ricci(m)
    der = derivations(m)
    cols = [np.eye(DIM).ravel()] + [D.ravel() for D in der.basis]
    X = np.array(cols).T
    y = rd.ric.ravel()
    coef, *_ = np.linalg.lstsq(X, y, rcond=None)
    sv = np.linalg.svd(X, compute_uv=False)
    cond = float(sv[0] / sv[-1]) if sv[-1] > 0 else float("inf")
    fit = X @ coef
    n = np.sqrt(rd.ric_norm2)
    resid = float(np.linalg.norm(y - fit) / (n if n > 1e-12 else 1.0))
    D = np.tensordot(coef[1:], der.basis, axes=1) if der.dim else np.zeros((DIM, DIM))
    dn = np.linalg.norm(D)
    sym = float(np.linalg.norm(D - D.T) / dn) if dn > 1e-14 else 0.0
    return SolitonResidual(float(coef[0]), D, resid, sym, cond)


def solvsoliton_check_aa(spec, tol: float = 1e-9) -> dict:
    """Almost-abelian solvsoliton test: A normal, or A nilpotent with
    [A, [A, A^t]] = c A.
    """
    if not isinstance(spec, AlmostAbelianSpec):
        spec = AlmostAbelianSpec.from_real(spec)
    A = spec.real6
    s = max(np.linalg.norm(A), 1e-300)
    An = A / s
    comm = An @ An.T - An.T @ An
    normal = bool(np.linalg.norm(comm) <= tol)
    nilpotent = bool(np.max(np.abs(np.linalg.matrix_power(An, 6))) <= tol)
    c = None
    proportional = False
    if nilpotent and not normal:
        K = An @ comm - comm @ An
        c = float(np.sum(K * An) / np.sum(An * An))
        proportional = bool(np.linalg.norm(K - c * An) <= tol)
        # report c for the unnormalized A: [A,[A,A^t]] scales by s^2
        c *= s ** 2
    return {
        "solvsoliton": normal or (nilpotent and proportional),
        "normal": normal,
        "nilpotent": nilpotent,
        "c": c,
    }


def ricci_of_spec(spec) -> RicciData:
    return ricci(mu_from_matrix(spec))
