"""Algebraic Laplacian solitons and eigenforms.

A closed structure is an algebraic Laplacian soliton when

    Laplacian(phi) = c phi + theta(D) phi

for some real c and a derivation D of the bracket, with theta the
infinitesimal GL(7) action of :mod:`g2solv.exterior`.  The fit is a dense
least-squares problem over (c, D).  A positive residual only rules out
algebraic solitons; whether a non-algebraic one exists is not decided.

The sign of the reported c is tied to the theta convention
(theta(I) = -k on k-forms); D is fitted over a linear space, so the
residual itself does not depend on it.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NotClosedError
from .exterior import DIM, KForm, form_inner, theta_matrix
from .g2core import DEFAULT_TOL, G2Structure, laplacian_phi
from .liealg import derivations

__all__ = ["SolitonFit", "EigenformFit", "laplacian_soliton_fit", "eigenform_fit", "STEADY_TOL"]

STEADY_TOL = 1e-8


@dataclass(frozen=True)
class SolitonFit:
    c: float
    D: np.ndarray
    residual: float
    kind: str  # expanding | steady | shrinking | none
    condition: float
    algebraic_only: bool = True

    @property
    def note(self) -> str:
        if self.kind == "none":
            return "not an algebraic soliton (non-algebraic solitons are not tested)"
        return f"{self.kind} algebraic Laplacian soliton"


@dataclass(frozen=True)
class EigenformFit:
    c: float
    residual: float


def laplacian_soliton_fit(g: G2Structure, tol: float = 1e-7) -> SolitonFit:
    """Fit Laplacian(phi) = c phi + theta(D) phi over c and D in Der(mu).

    Runs on the orthonormal frame normalized to |mu| = 1, so c is the value
    for a unit-norm bracket.  The residual is |defect| / |Laplacian(phi)|
    (absolute when the Laplacian vanishes).  ``kind`` is only assigned
    when the residual is at most ``tol``.
    """
    if not g.is_closed():
        raise NotClosedError("Laplacian soliton fit needs a closed structure")
    o = g.ortho
    n = o.mu.norm()
    mu = o.mu if n == 0 else o.mu.scaled(1.0 / n)
    gn = G2Structure(mu, o.phi)
    lap = laplacian_phi(gn).coeffs
    der = derivations(mu)
    cols = [o.phi.coeffs] + [theta_matrix(D, 3) @ o.phi.coeffs for D in der.basis]
    X = np.array(cols).T
    coef, *_ = np.linalg.lstsq(X, lap, rcond=None)
    sv = np.linalg.svd(X, compute_uv=False)
    positive = sv[sv > 1e-12 * sv[0]]
    cond = float(positive[0] / positive[-1])
    lap_norm = np.linalg.norm(lap)
    resid = float(np.linalg.norm(lap - X @ coef) / (lap_norm if lap_norm > 1e-14 else 1.0))
    c = float(coef[0])
    D = np.tensordot(coef[1:], der.basis, axes=1) if der.dim else np.zeros((DIM, DIM))
    if resid > tol:
        kind = "none"
    elif abs(c) <= STEADY_TOL * max(lap_norm, 1.0):
        kind = "steady"
    else:
        kind = "expanding" if c > 0 else "shrinking"
    return SolitonFit(c, D, resid, kind, cond)


def eigenform_fit(g: G2Structure) -> EigenformFit:
    """c = <Laplacian(phi), phi>/|phi|^2 and |Laplacian(phi) - c phi| / |Laplacian(phi)|.

    Uses the Hodge route, so non-closed structures are fine.
    """
    o = g.ortho
    lap = laplacian_phi(o, route="hodge")
    c = form_inner(lap, o.phi) / o.phi.norm2()
    ln = lap.norm()
    resid = (lap - c * o.phi).norm() / max(ln, DEFAULT_TOL * max(o.mu.norm() ** 2, 1e-300))
    if ln == 0:
        resid = 0.0
    return EigenformFit(float(c), float(resid))
