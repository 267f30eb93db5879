"""Named parametrized families of closed structures and reference brackets."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from ..errors import InputError
from ..liealg import AlmostAbelianSpec, LieBracket

__all__ = ["Param", "FamilySpec", "FAMILIES", "catalog", "family", "list_families"]


@dataclass(frozen=True)
class Param:
    name: str
    lo: float = -np.inf
    hi: float = np.inf
    lo_open: bool = True
    hi_open: bool = True
    default: Optional[float] = None

    def check(self, v: float):
        if not np.isfinite(v):
            raise InputError(f"parameter {self.name} must be finite")
        below = v <= self.lo if self.lo_open else v < self.lo
        above = v >= self.hi if self.hi_open else v > self.hi
        if below or above:
            lb = "(" if self.lo_open else "["
            rb = ")" if self.hi_open else "]"
            raise InputError(f"parameter {self.name}={v} outside {lb}{self.lo}, {self.hi}{rb}")


@dataclass(frozen=True)
class FamilySpec:
    """A family: its parameters, a builder and (when printed) the F formula."""

    name: str
    params: tuple
    build: Callable = field(repr=False)
    printed_F: Optional[Callable] = field(default=None, repr=False)
    constraint: Optional[Callable] = field(default=None, repr=False)
    doc: str = ""

    def resolve(self, values: Optional[dict] = None) -> dict:
        values = dict(values or {})
        known = {p.name for p in self.params}
        extra = set(values) - known
        if extra:
            raise InputError(f"family {self.name} has no parameter(s) {sorted(extra)}; "
                             f"expected {sorted(known)}")
        out = {}
        for p in self.params:
            if p.name in values:
                v = float(values[p.name])
            elif p.default is not None:
                v = p.default
            else:
                raise InputError(f"family {self.name} needs parameter {p.name}")
            p.check(v)
            out[p.name] = v
        if self.constraint is not None:
            msg = self.constraint(**out)
            if msg:
                raise InputError(f"family {self.name}: {msg}")
        return out

    def __call__(self, **values):
        return self.build(**self.resolve(values))


def _cx(rows):
    return AlmostAbelianSpec.from_complex(np.array(rows, dtype=complex))


def _heis():
    return LieBracket.from_terms([(1, 2, 3, 1.0)])


def _hyp():
    return LieBracket.from_terms([(7, i, i, 1.0) for i in range(1, 7)])


def _nf1(theta, beta_re, beta_im):
    a = np.exp(1j * theta)
    b = beta_re + 1j * beta_im
    return _cx(np.diag([a, b, -a - b]))


def _nf1_constraint(theta, beta_re, beta_im):
    if abs(np.cos(theta)) < 1e-12:
        return "alpha must differ from +-i"
    return None


def _dt_constraint(a, b, t):
    if a == b:
        return "a must differ from b"
    return None


def _ab_constraint(a, b):
    if a == 0 and b == 0:
        return "a and b cannot both vanish"
    return None


_T_POS = Param("t", 0.0, np.inf)

FAMILIES = {
    f.name: f
    for f in [
        FamilySpec(
            "A_t", (_T_POS,),
            lambda t: _cx([[t, -1, 0], [1, -t, 0], [0, 0, 0]]),
            lambda t: t ** 4 / (t ** 4 + t ** 2),
            doc="imaginary type for t < 1, Spec = {+-i sqrt(1 - t^2)}",
        ),
        FamilySpec(
            "B_t", (_T_POS,),
            lambda t: _cx([[t, -1, 0], [1, t, 0], [0, 0, -2 * t]]),
            lambda t: 1.0,
            doc="normal; Laplacian solitons, Spec = {t +- i, -2t}",
        ),
        FamilySpec(
            "C_t", (_T_POS,),
            lambda t: _cx([[t, -1, 0], [1, 0, 0], [0, 0, -t]]),
            lambda t: 4 * t ** 4 / (4 * t ** 4 + t ** 2),
            doc="real type",
        ),
        FamilySpec(
            "D_t", (Param("a"), Param("b"), _T_POS),
            lambda a, b, t: _cx([[1j * a, t, 0], [0, 1j * b, 0], [0, 0, -1j * (a + b)]]),
            lambda a, b, t: t ** 4 / (t ** 4 + (a - b) ** 2 * t ** 2),
            _dt_constraint,
            doc="diag(ai, bi, ci) + t E12 with c = -(a + b)",
        ),
        FamilySpec(
            "ab", (Param("a"), Param("b")),
            lambda a, b: _cx([[0, a, 0], [b, 0, 0], [0, 0, 0]]),
            lambda a, b: (a + b) ** 4 / ((a + b) ** 4 + (a ** 2 - b ** 2) ** 2),
            _ab_constraint,
            doc="two-parameter family used for the Laplacian flow",
        ),
        FamilySpec(
            "mu6", (Param("a", 0.0, np.inf),),
            lambda a: _cx([[0, a, 0], [0, 0, 1], [0, 0, 0]]),
            lambda a: (a ** 4 + 2 * a ** 2 + 1) / (2 * a ** 4 + a ** 2 + 2),
            doc="closed structures on the 3-step nilpotent group; nilsoliton at a = 1",
        ),
        FamilySpec(
            "normal_form_1", (Param("theta", default=0.0), Param("beta_re"), Param("beta_im")),
            _nf1, None, _nf1_constraint,
            doc="diag(alpha, beta, gamma), alpha = exp(i theta), alpha + beta + gamma = 0",
        ),
        FamilySpec(
            "normal_form_2", (Param("theta", default=0.0),),
            lambda theta: _cx([[np.exp(1j * theta), 1, 0], [0, np.exp(1j * theta), 0],
                               [0, 0, -2 * np.exp(1j * theta)]]),
            None,
            lambda theta: "alpha must differ from +-i" if abs(np.cos(theta)) < 1e-12 else None,
            doc="[[alpha, 1, 0], [0, alpha, 0], [0, 0, -2 alpha]], |alpha| = 1",
        ),
        FamilySpec(
            "normal_form_3", (), lambda: _cx([[0, 1, 0], [0, 0, 0], [0, 0, 0]]),
            lambda: 0.5, doc="E12; the nilpotent group mu_2",
        ),
        FamilySpec(
            "normal_form_4", (), lambda: _cx([[0, 1, 0], [0, 0, 1], [0, 0, 0]]),
            lambda: 0.8, doc="E12 + E23; the nilpotent group mu_6",
        ),
        FamilySpec(
            "normal_form_5", (Param("a"),),
            lambda a: _cx(np.diag([1j, 1j * a, 1j * (-1 - a)])),
            None, doc="diag(i, ai, bi) with 1 + a + b = 0; torsion-free",
        ),
        FamilySpec(
            "normal_form_6", (),
            lambda: _cx([[1j, 1, 0], [0, 1j, 0], [0, 0, -2j]]),
            None, doc="[[i, 1, 0], [0, i, 0], [0, 0, -2i]]",
        ),
        FamilySpec("mu_heis", (), _heis, lambda: 1.0 / 3.0,
                   doc="[e1, e2] = e3 (Heisenberg plus a 4-dim abelian factor)"),
        FamilySpec("mu_hyp", (), _hyp, lambda: 7.0,
                   doc="[e7, e_i] = e_i; real hyperbolic space"),
        FamilySpec("zero", (), LieBracket.zero, None, doc="abelian; flat, torsion-free"),
    ]
}
FAMILIES["mu2"] = FAMILIES["normal_form_3"]


def list_families() -> list:
    return sorted(FAMILIES)


def family(name: str) -> FamilySpec:
    try:
        return FAMILIES[name]
    except KeyError:
        raise InputError(f"unknown family {name!r}; valid families: {', '.join(list_families())}")


def catalog(name: str, **params):
    """Build the matrix or bracket of a named family."""
    return family(name)(**params)
