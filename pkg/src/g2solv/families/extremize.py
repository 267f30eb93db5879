"""Gradient ascent/descent of F along the conjugation orbit R* SL(3, C) . A.

The orbit is parametrized at the current point by X in sl(3, C) (16 real
dimensions) through A -> exp(X) A exp(-X).  Every step is taken in the Lie
algebra, so iterates stay on the orbit; A is rescaled to unit norm after
each step, which is harmless since F is scale-invariant.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import expm

from ..curvature import pinching_F
from ..errors import InputError
from ..liealg import AlmostAbelianSpec, closedness_criterion, mu_from_matrix

__all__ = ["ExtremizeResult", "extremize_F", "orbit_gradient", "SL3C_BASIS"]


def _sl3c_basis():
    out = []
    for i in range(3):
        for j in range(3):
            if i != j:
                E = np.zeros((3, 3), complex)
                E[i, j] = 1
                out += [E, 1j * E]
    for d in ([1, -1, 0], [0, 1, -1]):
        H = np.diag(np.array(d, dtype=complex))
        out += [H, 1j * H]
    return np.array(out)


SL3C_BASIS = _sl3c_basis()


def _F(A):
    H = 0.5 * (A + A.conj().T)
    h4 = np.real(np.trace(H @ H.conj().T)) ** 2
    C = A @ A.conj().T - A.conj().T @ A
    return h4 / (h4 + np.real(np.trace(C @ C.conj().T)) / 8.0)


def _conj(X, A):
    g = expm(X)
    return g @ A @ np.linalg.inv(g)


def orbit_gradient(A, h: float = 1e-5) -> np.ndarray:
    """Central-difference gradient of X -> F(exp(X) A exp(-X)) at X = 0.

    Coordinates are relative to ``SL3C_BASIS``.
    """
    A = np.asarray(A, dtype=complex)
    g = np.empty(len(SL3C_BASIS))
    for k, E in enumerate(SL3C_BASIS):
        g[k] = (_F(_conj(h * E, A)) - _F(_conj(-h * E, A))) / (2 * h)
    return g


@dataclass
class ExtremizeResult:
    A: np.ndarray
    F: float
    trace: list
    grad_norm: float
    iterations: int
    converged: bool
    degenerates: bool = False
    F_pipeline: float = float("nan")
    notes: list = field(default_factory=list)


def extremize_F(start, direction: str = "max", grad_tol: float = 1e-8,
                max_iter: int = 10_000, h: float = 1e-5,
                escape_cond: float = 1e6) -> ExtremizeResult:
    """Climb (or descend) F along the orbit of a closed almost-abelian structure.

    Backtracking (Armijo) line search makes the F trace monotone.  Stops when
    the orbit gradient drops to ``grad_tol`` or after ``max_iter`` steps.
    The run is flagged ``degenerates`` when F stalls while the gradient does
    not vanish, or when the accumulated conjugating element becomes
    ill-conditioned (cond > ``escape_cond``): the extremum is then only
    approached at the orbit boundary.
    The final F is re-evaluated through the full curvature pipeline.
    """
    if direction not in ("max", "min"):
        raise InputError("direction must be 'max' or 'min'")
    if not isinstance(start, AlmostAbelianSpec):
        start = AlmostAbelianSpec.from_complex(start)
    if not closedness_criterion(start)["closed"]:
        raise InputError("extremize_F needs a closed start (A in sl(3, C))")
    sgn = 1.0 if direction == "max" else -1.0
    A = start.complex3.astype(complex)
    A = A / np.linalg.norm(A)
    f = _F(A)
    trace = [f]
    step = 1.0
    converged = False
    degenerates = False
    stall = 0
    G = np.eye(3, dtype=complex)
    it = 0
    gn = np.inf
    for it in range(1, max_iter + 1):
        g = orbit_gradient(A, h)
        gn = float(np.linalg.norm(g))
        if gn <= grad_tol:
            converged = True
            it -= 1
            break
        X = sgn * np.tensordot(g, SL3C_BASIS, axes=1)
        s = min(step * 2.0, 1e3)
        while True:
            B = _conj(s * X, A)
            B = B / np.linalg.norm(B)
            fb = _F(B)
            if sgn * (fb - f) >= 1e-4 * s * gn ** 2:
                break
            s *= 0.5
            if s < 1e-14:
                break
        if s < 1e-14 or sgn * (fb - f) < 0:
            # no admissible step left at machine precision
            break
        stall = stall + 1 if abs(fb - f) < 1e-12 else 0
        A, f, step = B, fb, s
        G = expm(s * X) @ G
        trace.append(f)
        if stall >= 200:
            degenerates = True
            break
    notes = []
    if np.linalg.cond(G) > escape_cond:
        degenerates = True
        notes.append("conjugating element ill-conditioned: escapes to degeneration")
    if np.linalg.norm(0.5 * (A + A.conj().T)) <= 1e-6:
        # hermitian part vanishing means the iterate approaches su(3)
        degenerates = True
        notes.append("approaches a torsion-free structure, where F is undefined")
    res = ExtremizeResult(A, float(f), trace, gn, it, converged, degenerates, notes=notes)
    res.F_pipeline = pinching_F(mu_from_matrix(AlmostAbelianSpec.from_complex(A))).F
    return res
