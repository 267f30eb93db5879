"""Laplacian flow d(phi)/dt = Laplacian_phi(phi) on a fixed Lie algebra.

The bracket stays put and the 3-form evolves; each right-hand-side
evaluation recomputes the induced metric of the current form.  For closed
phi the right-hand side is d(tau), so every RK4 increment is exact and
d(phi) = 0 is preserved up to roundoff.  The step is halved when a stage
leaves the positive cone or closedness drifts.
"""
from __future__ import annotations

import csv
import time
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ..curvature import pinching_F
from ..errors import InputError, NotPositiveError
from ..exterior import KForm
from ..g2core import G2Structure, laplacian_phi
from ..liealg import ce_differential

__all__ = ["FlowSample", "FlowResult", "laplacian_flow", "write_flow_csv"]

CLOSED_DRIFT_TOL = 1e-8


@dataclass(frozen=True)
class FlowSample:
    t: float
    phi: np.ndarray = field(repr=False)
    F: Optional[float]
    tau_norm2: float
    dt: float
    halvings: int = 0
    closed_drift: float = 0.0


@dataclass
class FlowResult:
    samples: list
    truncated: bool = False
    aborted: bool = False
    message: str = ""
    elapsed: float = 0.0

    def __len__(self):
        return len(self.samples)

    def column(self, name):
        return np.array([getattr(s, name) for s in self.samples], dtype=float)

    @property
    def monotonicity(self) -> str:
        """'increasing', 'decreasing', 'constant' or 'mixed' for the F column."""
        F = self.column("F")
        if len(F) < 2 or np.any(np.isnan(F)):
            return "undefined"
        d = np.diff(F)
        if np.all(np.abs(d) <= 1e-12 * max(1.0, np.max(np.abs(F)))):
            return "constant"
        if np.all(d > 0):
            return "increasing"
        if np.all(d < 0):
            return "decreasing"
        return "mixed"


def _rhs(mu, phi_coeffs):
    g = G2Structure(mu, KForm(3, phi_coeffs))
    return laplacian_phi(g).coeffs


def _sample(mu, t, phi, dt, halvings):
    g = G2Structure(mu, KForm(3, phi))
    pr = pinching_F(g.ortho.mu)
    drift = ce_differential(mu, g.phi).norm() / max(mu.norm() * g.phi.norm(), 1e-300)
    return FlowSample(t, phi.copy(), pr.F, g.tau_norm2, dt, halvings, drift)


def laplacian_flow(start: G2Structure, t_end: float, dt_initial: float,
                   max_halvings: int = 20, max_steps: int = 100_000) -> FlowResult:
    """Integrate the Laplacian flow with classical RK4 from ``start`` to ``t_end``.

    Every accepted step is recorded, with F computed through the curvature
    pipeline on the evolved metric.  A step is rejected and halved when a
    stage form is not positive or when |d phi| drifts above 1e-8 relative
    to |mu||phi|.  After ``max_halvings`` consecutive halvings the trajectory
    is returned truncated.
    """
    if t_end <= 0 or dt_initial <= 0:
        raise InputError("t_end and dt_initial must be positive")
    if not start.is_closed():
        raise InputError("Laplacian flow needs a closed starting structure")
    t0 = time.perf_counter()
    mu = start.mu
    phi = start.phi.coeffs.astype(float).copy()
    samples = [_sample(mu, 0.0, phi, 0.0, 0)]
    t = 0.0
    dt = dt_initial
    res = FlowResult(samples)
    steps = 0
    while t < t_end * (1 - 1e-12) and steps < max_steps:
        h = min(dt, t_end - t)
        halvings = 0
        while True:
            try:
                k1 = _rhs(mu, phi)
                k2 = _rhs(mu, phi + 0.5 * h * k1)
                k3 = _rhs(mu, phi + 0.5 * h * k2)
                k4 = _rhs(mu, phi + h * k3)
                new = phi + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
                s = _sample(mu, t + h, new, h, halvings)
                if s.closed_drift > CLOSED_DRIFT_TOL:
                    raise _Drift(s.closed_drift)
                break
            except (NotPositiveError, _Drift) as exc:
                halvings += 1
                h *= 0.5
                if halvings > max_halvings:
                    res.truncated = True
                    res.aborted = isinstance(exc, _Drift)
                    res.message = f"step rejected {halvings} times at t={t:.6g}: {exc}"
                    res.elapsed = time.perf_counter() - t0
                    return res
        phi = new
        t += h
        samples.append(s)
        steps += 1
    res.elapsed = time.perf_counter() - t0
    return res


class _Drift(Exception):
    def __str__(self):
        return f"closedness drift {self.args[0]:.3e}"


def write_flow_csv(result: FlowResult, fh) -> None:
    w = csv.writer(fh)
    w.writerow(["t", "F", "tau_norm2", "dt"])
    f = lambda v: "" if v is None else format(v, ".17g")
    for s in result.samples:
        w.writerow([f(s.t), f(s.F), f(s.tau_norm2), f(s.dt)])
