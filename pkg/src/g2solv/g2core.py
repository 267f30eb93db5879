"""Left-invariant G2-structures: torsion, Laplacian, induced metric, classes.

A :class:`G2Structure` pairs a bracket with a positive 3-form.  With the
default form ``PHI`` the induced metric is the identity.  For any other
positive form, computations run in an orthonormal frame: with g = T^2 the
induced metric, the pair (T.mu, T.phi) is isomorphic to (mu, phi) and has
identity metric, so a single identity-metric code path covers both.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Optional

import numpy as np

from .errors import InconsistencyError, InputError, NotClosedError, NotPositiveError
from .exterior import (
    DIM,
    KForm,
    form_inner,
    gl_pullback,
    hodge,
    hodge_matrix,
    interior_matrices,
    pullback_matrix,
    wedge,
    wedge_matrix,
)
from .liealg import LieBracket, ce_differential, ce_matrix

__all__ = [
    "PHI",
    "PSI",
    "DEFAULT_TOL",
    "G2Structure",
    "TorsionTuple",
    "ERPResult",
    "CLASS_NAMES",
    "IMPLICATIONS",
    "torsion_two_form",
    "laplacian_phi",
    "torsion_forms",
    "classify",
    "close_under_implications",
    "erp_residual",
    "metric_from_threeform",
    "lambda2_projectors",
    "lambda3_27_basis",
]

DEFAULT_TOL = 1e-9

PHI = KForm.from_dict(
    3, {"127": 1, "347": 1, "567": 1, "135": 1, "146": -1, "236": -1, "245": -1}
)
PSI = hodge(PHI)


def metric_from_threeform(sigma: KForm):
    """Metric and volume induced by a positive 3-form.

    B(x, y) vol0 = (1/6) i_x s ^ i_y s ^ s against vol0 = e^{1..7}, then
    g = det(B)^(-1/9) B and vol = sqrt(det g).  Raises NotPositiveError
    when B is not positive definite.
    """
    if sigma.degree != 3:
        raise InputError("metric_from_threeform needs a 3-form")
    I = interior_matrices(3)
    contr = np.einsum("iab,b->ia", I, sigma.coeffs)  # i_{e_i} sigma, 2-forms
    w = wedge_matrix(sigma, 4)  # 4-forms -> 7-forms
    # B[i, j] = (contr_i ^ contr_j ^ sigma)/6
    from .exterior import _WEDGE  # 2 x 2 -> 4 table

    four = np.einsum("ia,jb,abc->ijc", contr, contr, _WEDGE[2, 2])
    B = np.einsum("ijc,c->ij", four, w[0]) / 6.0
    B = 0.5 * (B + B.T)
    ev = np.linalg.eigvalsh(B)
    if ev[0] <= 0:
        raise NotPositiveError("3-form is not positive (induced bilinear form is not definite)")
    detB = float(np.prod(ev))
    g = detB ** (-1.0 / 9.0) * B
    vol = float(np.sqrt(np.linalg.det(g)))
    return g, vol


def _sym_sqrt(g):
    ev, V = np.linalg.eigh(g)
    return (V * np.sqrt(ev)) @ V.T


@dataclass(frozen=True, eq=False)
class G2Structure:
    """Left-invariant G2-structure (mu, phi) on the Lie group S_mu."""

    mu: LieBracket
    phi: KForm = field(default=PHI)

    @cached_property
    def is_standard(self) -> bool:
        return bool(np.array_equal(self.phi.coeffs, PHI.coeffs))

    @cached_property
    def metric(self) -> np.ndarray:
        if self.is_standard:
            return np.eye(DIM)
        return metric_from_threeform(self.phi)[0]

    @cached_property
    def frame(self) -> np.ndarray:
        """T = g^(1/2); T.mu with T.phi has identity metric."""
        if self.is_standard:
            return np.eye(DIM)
        return _sym_sqrt(self.metric)

    @cached_property
    def ortho(self) -> "G2Structure":
        """Isomorphic structure with identity induced metric."""
        if self.is_standard:
            return self
        T = self.frame
        phi_o = gl_pullback(T, self.phi)
        out = G2Structure(self.mu.act(T), phi_o)
        out.__dict__.update(metric=np.eye(DIM), frame=np.eye(DIM), ortho=out)
        return out

    @cached_property
    def psi(self) -> KForm:
        if self.is_standard:
            return PSI
        # *phi for the induced metric: pull back *_0 of the orthonormal form
        return self.to_original(hodge(self.ortho.phi))

    def to_original(self, form: KForm) -> KForm:
        """Pull a form from the orthonormal frame back to the original basis."""
        if self.is_standard:
            return form
        return KForm(form.degree, pullback_matrix(self.frame, form.degree) @ form.coeffs)

    @cached_property
    def scale(self) -> float:
        return max(self.ortho.mu.norm(), 1e-300)

    def scaled(self, c: float) -> "G2Structure":
        return G2Structure(self.mu.scaled(c), self.phi)

    @cached_property
    def dphi(self) -> KForm:
        return ce_differential(self.ortho.mu, self.ortho.phi)

    @cached_property
    def dpsi(self) -> KForm:
        o = self.ortho
        return ce_differential(o.mu, hodge(o.phi))

    def is_closed(self, tol: float = DEFAULT_TOL) -> bool:
        return self.dphi.norm() <= tol * self.scale

    def is_torsion_free(self, tol: float = DEFAULT_TOL) -> bool:
        return self.is_closed(tol) and self.dpsi.norm() <= tol * self.scale

    @cached_property
    def tau(self) -> KForm:
        """-*d*phi in the orthonormal frame (no closedness check)."""
        return -hodge(self.dpsi)

    @cached_property
    def tau_norm2(self) -> float:
        return self.tau.norm2()


# ---------------------------------------------------------------------------

def torsion_two_form(g: G2Structure, allow_nonclosed: bool = False,
                     tol: float = DEFAULT_TOL) -> KForm:
    """Torsion 2-form tau = -*d*phi of a closed structure.

    Verifies d*phi = tau ^ phi and *(phi ^ tau) = -tau.  For a non-closed
    structure pass ``allow_nonclosed=True`` to get -*d*phi without checks.
    The result is expressed in the original basis.
    """
    o = g.ortho
    if not g.is_closed(tol):
        if not allow_nonclosed:
            raise NotClosedError(f"d phi = {g.dphi.norm():.3e} is not zero")
        return g.to_original(g.tau)
    tau = g.tau
    s = g.scale
    r1 = (g.dpsi - wedge(tau, o.phi)).norm()
    r2 = (hodge(wedge(o.phi, tau)) + tau).norm()
    if r1 > tol * s or r2 > tol * s:
        raise InconsistencyError(
            f"closed-structure identities fail: |d*phi - tau^phi| = {r1:.3e}, "
            f"|*(phi^tau) + tau| = {r2:.3e}"
        )
    return g.to_original(tau)


def _codiff(mu, a: KForm) -> KForm:
    # delta = (-1)^k * d * on k-forms in dimension 7
    if a.degree == 0:
        return KForm(0)
    k = a.degree
    return (-1) ** k * hodge(ce_differential(mu, hodge(a)))


def laplacian_phi(g: G2Structure, route: str = "fast") -> KForm:
    """Hodge Laplacian of phi.

    ``route="fast"`` returns d tau (closed structures only);
    ``route="hodge"`` evaluates d delta phi + delta d phi.
    """
    o = g.ortho
    if route == "fast":
        if not g.is_closed():
            raise NotClosedError("fast Laplacian route needs a closed structure")
        out = ce_differential(o.mu, g.tau)
    elif route == "hodge":
        out = ce_differential(o.mu, _codiff(o.mu, o.phi)) + _codiff(o.mu, g.dphi)
    else:
        raise InputError(f"unknown route {route!r}")
    return g.to_original(out)


# ---------------------------------------------------------------------------
# G2 representation pieces

def lambda2_projectors(phi: KForm = PHI):
    """(P7, P14) orthogonal projectors on 2-forms.

    Lambda^2_7 and Lambda^2_14 are the eigenspaces of b -> *(phi ^ b) with
    eigenvalues 2 and -1.  phi must have identity induced metric.
    """
    M = hodge_matrix(5) @ wedge_matrix(phi, 2)
    M = 0.5 * (M + M.T)
    ev, V = np.linalg.eigh(M)
    V14 = V[:, ev < 0.5]
    V7 = V[:, ev >= 0.5]
    if V14.shape[1] != 14 or not np.allclose(ev[ev < 0.5], -1, atol=1e-9):
        raise InconsistencyError("unexpected spectrum for b -> *(phi ^ b)")
    return V7 @ V7.T, V14 @ V14.T


def _lambda2_14_basis(phi):
    M = hodge_matrix(5) @ wedge_matrix(phi, 2)
    ev, V = np.linalg.eigh(0.5 * (M + M.T))
    return V[:, ev < 0.5]


def lambda3_27_basis(phi: KForm = PHI) -> np.ndarray:
    """Orthonormal basis (columns) of {g : g ^ phi = 0, g ^ *phi = 0}."""
    psi = hodge(phi)
    C = np.vstack([wedge_matrix(phi, 3), wedge_matrix(psi, 3)])
    _, s, vt = np.linalg.svd(C)
    rank = int(np.sum(s > 1e-9 * s[0]))
    basis = vt[rank:].T
    if basis.shape[1] != 27:
        raise InconsistencyError(f"Lambda^3_27 has dimension {basis.shape[1]}, expected 27")
    return basis


@dataclass(frozen=True)
class TorsionTuple:
    """Torsion forms of d phi = t0 *phi + 3 t1 ^ phi + *t3, d*phi = 4 t1 ^ *phi + t2 ^ phi."""

    tau0: float
    tau1: KForm
    tau2: KForm
    tau3: KForm
    residual: float
    tau1_mismatch: float = 0.0

    def norms(self) -> dict:
        return {
            "tau0": abs(self.tau0),
            "tau1": self.tau1.norm(),
            "tau2": self.tau2.norm(),
            "tau3": self.tau3.norm(),
        }


def _torsion_design(phi):
    psi = hodge(phi)
    B27 = lambda3_27_basis(phi)
    B14 = _lambda2_14_basis(phi)
    n4, n5 = 35, 21
    # unknowns: tau0 (1), tau1 (7), tau3 (27), tau2 (14)
    top = np.hstack([
        psi.coeffs[:, None],
        -3 * wedge_matrix(phi, 1),  # phi ^ t1 = -t1 ^ phi
        hodge_matrix(3) @ B27,
        np.zeros((n4, 14)),
    ])
    bottom = np.hstack([
        np.zeros((n5, 1)),
        4 * wedge_matrix(psi, 1),
        np.zeros((n5, 27)),
        wedge_matrix(phi, 2) @ B14,
    ])
    return np.vstack([top, bottom]), B27, B14


_STD_DESIGN = None


def torsion_forms(g: G2Structure, tol: float = 1e-6) -> TorsionTuple:
    """Solve the torsion decomposition of (d phi, d *phi) by least squares.

    tau1 is shared by both equations and solved jointly; tau2 and tau3 are
    constrained to Lambda^2_14 and Lambda^3_27 by parametrizing them in
    orthonormal bases of those spaces.  Raises InconsistencyError when the
    reconstruction residual relative to |mu| exceeds ``tol``.
    """
    global _STD_DESIGN
    o = g.ortho
    if o.is_standard:
        if _STD_DESIGN is None:
            _STD_DESIGN = _torsion_design(PHI)
        M, B27, B14 = _STD_DESIGN
    else:
        M, B27, B14 = _torsion_design(o.phi)
    rhs = np.concatenate([g.dphi.coeffs, g.dpsi.coeffs])
    x, *_ = np.linalg.lstsq(M, rhs, rcond=None)
    resid = float(np.linalg.norm(M @ x - rhs))
    s = g.scale
    if resid > tol * s:
        raise InconsistencyError(f"torsion decomposition residual {resid:.3e} is not small")

    # separate tau1 estimates from each equation, for the consistency report
    t1a = np.linalg.lstsq(M[:35, :36], rhs[:35], rcond=None)[0][1:8]
    t1b = np.linalg.lstsq(M[35:][:, list(range(1, 8)) + list(range(35, 49))],
                          rhs[35:], rcond=None)[0][:7]
    mismatch = float(np.linalg.norm(t1a - t1b))

    tau0 = float(x[0])
    tau1 = KForm(1, x[1:8])
    tau3 = KForm(3, B27 @ x[8:35])
    tau2 = KForm(2, B14 @ x[35:49])
    tau1, tau2, tau3 = (g.to_original(t) for t in (tau1, tau2, tau3))
    return TorsionTuple(tau0, tau1, tau2, tau3, resid / s, mismatch / s)


# ---------------------------------------------------------------------------
# class taxonomy

CLASS_NAMES = ("P", "C", "CC", "LCP", "LCC", "NP", "LCNP", "ST", "LCB",
               "EF", "E", "RS", "LS")

# arrows of the inclusion diagram
IMPLICATIONS = (
    ("P", "C"), ("P", "LCP"), ("P", "NP"),
    ("C", "LCC"), ("LCP", "LCC"), ("LCP", "LCNP"),
    ("NP", "LCNP"), ("NP", "CC"), ("NP", "EF"), ("NP", "E"),
    ("E", "RS"), ("EF", "LS"),
    ("LCC", "LCB"), ("LCNP", "ST"), ("CC", "ST"), ("ST", "LCB"),
)


def close_under_implications(flags) -> set:
    out = set(flags)
    changed = True
    while changed:
        changed = False
        for a, b in IMPLICATIONS:
            if a in out and b not in out:
                out.add(b)
                changed = True
    return out


def classify(g: G2Structure, tol: float = DEFAULT_TOL, curvature: bool = True,
             raw: bool = False) -> set:
    """Class flags of a structure, closed under the inclusion diagram.

    Torsion classes come from vanishing patterns of (tau0, tau1, tau2, tau3)
    at ``tol`` after normalizing |mu| = 1; EF from the eigenform fit.  With
    ``curvature=True`` the E, RS and LS flags are filled from the curvature
    and soliton modules.  ``raw=True`` skips the implication closure.
    """
    from .solitonlab import eigenform_fit

    n = g.ortho.mu.norm()
    gn = g if n == 0 else G2Structure(g.ortho.mu.scaled(1.0 / n), g.ortho.phi)
    t = torsion_forms(gn)
    z0 = abs(t.tau0) <= tol
    z1 = t.tau1.norm() <= tol
    z2 = t.tau2.norm() <= tol
    z3 = t.tau3.norm() <= tol
    dtau1 = ce_differential(gn.mu, t.tau1).norm() <= tol
    flags = set()
    if z0 and z1 and z2 and z3:
        flags.add("P")
    if z0 and z1 and z3:
        flags.add("C")
    if z1 and z2:
        flags.add("CC")
    if z0 and z2 and z3:
        flags.add("LCP")
    if z0 and z3:
        flags.add("LCC")
    if z1 and z2 and z3:
        flags.add("NP")
    if z2 and z3:
        flags.add("LCNP")
    if z2:
        flags.add("ST")
    if dtau1:
        flags.add("LCB")
    if eigenform_fit(gn).residual <= 1e3 * tol:
        flags.add("EF")
    if curvature:
        from .curvature import einstein_residual, ricci_soliton_residual
        from .solitonlab import laplacian_soliton_fit

        if einstein_residual(gn.mu) <= 1e3 * tol:
            flags.add("E")
        if ricci_soliton_residual(gn.mu).residual <= 1e3 * tol:
            flags.add("RS")
        if gn.is_closed(tol) and laplacian_soliton_fit(gn).residual <= 1e3 * tol:
            flags.add("LS")
    return flags if raw else close_under_implications(flags)


# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ERPResult:
    residual: Optional[float]
    trivially_satisfied: bool

    def __float__(self):
        return float("nan") if self.residual is None else self.residual


def erp_residual(g: G2Structure, tol: float = DEFAULT_TOL) -> ERPResult:
    """Scale-free defect of d tau = |tau|^2 phi / 6 + *(tau ^ tau) / 6.

    The norm of the defect is divided by |tau|^2 so that mu -> c mu leaves
    it unchanged.  Torsion-free input returns ``trivially_satisfied``.
    """
    if not g.is_closed(tol):
        raise NotClosedError("ERP condition is defined for closed structures")
    o = g.ortho
    tau = g.tau
    t2 = tau.norm2()
    if np.sqrt(t2) <= tol * g.scale:
        return ERPResult(None, True)
    lhs = ce_differential(o.mu, tau)
    rhs = (t2 / 6.0) * o.phi + hodge(wedge(tau, tau)) / 6.0
    return ERPResult((lhs - rhs).norm() / t2, False)
