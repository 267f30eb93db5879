"""Dense exterior algebra on R^7.

A k-form is stored as a vector of C(7, k) coefficients over the strictly
increasing index tuples in lexicographic order.  Indices are 0-based
internally; the ``from_dict``/``basis_form`` constructors take 1-based
digit-string labels (``"127"`` is e^1 ^ e^2 ^ e^7).

Every operator is precomputed once as a small integer table, so wedge,
Hodge star, interior product and the gl(7) actions reduce to matrix
products.
"""
from __future__ import annotations

import itertools
from math import comb

import numpy as np

from .errors import InputError

__all__ = [
    "DIM",
    "FORM_TOL",
    "KForm",
    "basis_form",
    "combos",
    "wedge",
    "hodge",
    "form_inner",
    "interior",
    "gl_pullback",
    "pullback_matrix",
    "infinitesimal_action",
    "theta_matrix",
    "wedge_matrix",
    "VOL",
]

DIM = 7
FORM_TOL = 1e-9

_COMBOS = [list(itertools.combinations(range(DIM), k)) for k in range(DIM + 1)]
_INDEX = [{t: n for n, t in enumerate(c)} for c in _COMBOS]


def combos(k: int) -> list[tuple[int, ...]]:
    """Increasing 0-based index tuples of size ``k``, in storage order."""
    return _COMBOS[k]


def _sort_sign(seq):
    """Return (sign, sorted tuple) of a sequence; sign 0 on repeated index."""
    seq = list(seq)
    if len(set(seq)) != len(seq):
        return 0, None
    sign = 1
    for i in range(len(seq)):
        for j in range(len(seq) - 1 - i):
            if seq[j] > seq[j + 1]:
                seq[j], seq[j + 1] = seq[j + 1], seq[j]
                sign = -sign
    return sign, tuple(seq)


class KForm:
    """An alternating k-form on R^7 with dense coefficients.

    Instances are treated as immutable; the coefficient array is flagged
    read-only.  ``vanishes_by_degree`` marks the zero 7-form returned by a
    wedge whose degrees overflow.
    """

    __slots__ = ("degree", "coeffs", "vanishes_by_degree")
    __hash__ = None

    def __init__(self, degree: int, coeffs=None, vanishes_by_degree: bool = False):
        if not 0 <= degree <= DIM:
            raise InputError(f"form degree must be in 0..7, got {degree}")
        n = comb(DIM, degree)
        if coeffs is None:
            arr = np.zeros(n)
        else:
            arr = np.array(coeffs, dtype=float).reshape(-1)
            if arr.shape != (n,):
                raise InputError(f"a {degree}-form needs {n} coefficients, got {arr.size}")
            if not np.all(np.isfinite(arr)):
                raise InputError("form coefficients must be finite")
        arr.setflags(write=False)
        self.degree = degree
        self.coeffs = arr
        self.vanishes_by_degree = vanishes_by_degree

    @classmethod
    def from_dict(cls, degree: int, terms: dict) -> "KForm":
        """Build from ``{(i, j, k): value}`` with 1-based labels.

        Tuples need not be increasing; they are sorted with the matching sign.
        """
        arr = np.zeros(comb(DIM, degree))
        for idx, val in terms.items():
            if isinstance(idx, str):
                idx = tuple(int(ch) for ch in idx)
            idx = tuple(i - 1 for i in idx)
            if len(idx) != degree or not all(0 <= i < DIM for i in idx):
                raise InputError(f"bad index tuple {idx} for a {degree}-form")
            s, t = _sort_sign(idx)
            if s:
                arr[_INDEX[degree][t]] += s * val
        return cls(degree, arr)

    def to_dict(self, tol: float = 0.0) -> dict:
        """Nonzero coefficients keyed by 1-based label strings like ``"127"``."""
        return {
            "".join(str(i + 1) for i in t): float(v)
            for t, v in zip(_COMBOS[self.degree], self.coeffs)
            if abs(v) > tol
        }

    def __repr__(self):
        terms = " ".join(f"{v:+.6g}*e{k}" for k, v in self.to_dict(1e-14).items())
        return f"KForm({self.degree}: {terms or '0'})"

    def _check(self, other):
        if not isinstance(other, KForm):
            return NotImplemented
        if other.degree != self.degree:
            raise InputError(f"degree mismatch: {self.degree} vs {other.degree}")
        return other

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return KForm(self.degree, self.coeffs + other.coeffs)

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return KForm(self.degree, self.coeffs - other.coeffs)

    def __neg__(self):
        return KForm(self.degree, -self.coeffs)

    def __mul__(self, s):
        if isinstance(s, KForm):
            return NotImplemented
        return KForm(self.degree, float(s) * self.coeffs)

    __rmul__ = __mul__

    def __truediv__(self, s):
        return KForm(self.degree, self.coeffs / float(s))

    def __xor__(self, other):
        return wedge(self, other)

    def __eq__(self, other):
        if not isinstance(other, KForm):
            return NotImplemented
        return self.allclose(other)

    def allclose(self, other: "KForm", tol: float = FORM_TOL) -> bool:
        return self.degree == other.degree and bool(
            np.max(np.abs(self.coeffs - other.coeffs), initial=0.0) <= tol
        )

    def norm(self) -> float:
        return float(np.linalg.norm(self.coeffs))

    def norm2(self) -> float:
        return float(self.coeffs @ self.coeffs)

    def is_zero(self, tol: float = FORM_TOL) -> bool:
        return bool(np.max(np.abs(self.coeffs), initial=0.0) <= tol)

    @classmethod
    def zero(cls, degree: int) -> "KForm":
        return cls(degree)


def basis_form(label: str) -> KForm:
    """Basis monomial from a 1-based label, e.g. ``basis_form("127")``.

    The empty label gives the constant 1.
    """
    if label == "":
        return KForm(0, [1.0])
    return KForm.from_dict(len(label), {label: 1.0})


# ---------------------------------------------------------------------------
# precomputed tables

def _build_wedge_tables():
    tables = {}
    for p in range(DIM + 1):
        for q in range(DIM + 1 - p):
            t = np.zeros((comb(DIM, p), comb(DIM, q), comb(DIM, p + q)))
            for a, I in enumerate(_COMBOS[p]):
                for b, J in enumerate(_COMBOS[q]):
                    s, K = _sort_sign(I + J)
                    if s:
                        t[a, b, _INDEX[p + q][K]] = s
            tables[p, q] = t
    return tables


def _build_hodge_tables():
    full = tuple(range(DIM))
    tables = []
    for k in range(DIM + 1):
        t = np.zeros((comb(DIM, DIM - k), comb(DIM, k)))
        for a, I in enumerate(_COMBOS[k]):
            Ic = tuple(i for i in full if i not in I)
            s, _ = _sort_sign(I + Ic)
            t[_INDEX[DIM - k][Ic], a] = s
        tables.append(t)
    return tables


def _build_interior_tables():
    # _INTERIOR[k][i] maps k-forms to (k-1)-forms: i_{e_i}
    tables = [None]
    for k in range(1, DIM + 1):
        t = np.zeros((DIM, comb(DIM, k - 1), comb(DIM, k)))
        for a, I in enumerate(_COMBOS[k]):
            for pos, i in enumerate(I):
                rest = I[:pos] + I[pos + 1:]
                t[i, _INDEX[k - 1][rest], a] = (-1) ** pos
        tables.append(t)
    return tables


def _build_theta_tables():
    # _THETA[k][i, j] is the matrix of e^I -> sum over slots holding i of
    # the monomial with i replaced by j (sorted, signed).  The derivative of
    # the pullback by (1 + tD) is sum_ij D[i, j] * _THETA[k][i, j].
    tables = []
    for k in range(DIM + 1):
        n = comb(DIM, k)
        t = np.zeros((DIM, DIM, n, n))
        for a, I in enumerate(_COMBOS[k]):
            for pos, i in enumerate(I):
                for j in range(DIM):
                    s, K = _sort_sign(I[:pos] + (j,) + I[pos + 1:])
                    if s:
                        t[i, j, _INDEX[k][K], a] += s
        tables.append(t)
    return tables


_WEDGE = _build_wedge_tables()
_HODGE = _build_hodge_tables()
_INTERIOR = _build_interior_tables()
_THETA = _build_theta_tables()

VOL = KForm(DIM, [1.0])


# ---------------------------------------------------------------------------
# operations

def wedge(a: KForm, b: KForm) -> KForm:
    """Exterior product.

    If the degrees add up past 7 the result is the zero 7-form with
    ``vanishes_by_degree`` set.
    """
    p, q = a.degree, b.degree
    if p + q > DIM:
        return KForm(DIM, vanishes_by_degree=True)
    return KForm(p + q, np.einsum("i,j,ijk->k", a.coeffs, b.coeffs, _WEDGE[p, q]))


def wedge_matrix(a: KForm, q: int) -> np.ndarray:
    """Matrix of ``b -> a ^ b`` on q-forms."""
    return np.einsum("i,ijk->kj", a.coeffs, _WEDGE[a.degree, q])


def hodge(a: KForm) -> KForm:
    """Hodge star for the standard inner product and orientation e^{1..7}."""
    return KForm(DIM - a.degree, _HODGE[a.degree] @ a.coeffs)


def hodge_matrix(k: int) -> np.ndarray:
    return _HODGE[k]


def form_inner(a: KForm, b: KForm) -> float:
    """Inner product making the monomials e^I orthonormal."""
    if a.degree != b.degree:
        raise InputError(f"inner product of a {a.degree}-form with a {b.degree}-form")
    return float(a.coeffs @ b.coeffs)


def interior(x, a: KForm) -> KForm:
    """Contraction i_x a; returns the zero 0-form on a 0-form."""
    if a.degree == 0:
        return KForm(0)
    x = np.asarray(x, dtype=float)
    return KForm(a.degree - 1, np.einsum("i,iab,b->a", x, _INTERIOR[a.degree], a.coeffs))


def interior_matrices(k: int) -> np.ndarray:
    """Stack of the 7 matrices i_{e_i} acting on k-forms (k >= 1)."""
    return _INTERIOR[k]


def pullback_matrix(h, k: int) -> np.ndarray:
    """Matrix of the raw pullback a -> a(h., ..., h.) on k-forms.

    The entry for (J, I) is the minor det h[I, J].
    """
    h = np.asarray(h, dtype=float)
    if k == 0:
        return np.ones((1, 1))
    idx = np.array(_COMBOS[k])
    # minors[I, J] = det h[I][:, J]
    sub = h[idx[:, None, :, None], idx[None, :, None, :]]
    return np.linalg.det(sub).T


def gl_pullback(h, a: KForm, inverse: bool = True) -> KForm:
    """GL(7) action on forms.

    With ``inverse=True`` (default) this is the left action
    (h.a)(v, ...) = a(h^{-1} v, ...); otherwise the raw pullback
    a(h v, ...).
    """
    h = np.asarray(h, dtype=float)
    if h.shape != (DIM, DIM) or not np.all(np.isfinite(h)):
        raise InputError("expected a finite 7x7 matrix")
    if inverse:
        if np.linalg.cond(h) > 1e14:
            raise InputError("singular map cannot act by its inverse")
        h = np.linalg.inv(h)
    return KForm(a.degree, pullback_matrix(h, a.degree) @ a.coeffs)


def theta_matrix(D, k: int) -> np.ndarray:
    """Matrix of the derivation theta(D) on k-forms."""
    return -np.einsum("ij,ijab->ab", np.asarray(D, dtype=float), _THETA[k])


def infinitesimal_action(D, a: KForm) -> KForm:
    """theta(D) a = d/dt|_0 exp(tD).a = -sum_j a(..., D v_j, ...)."""
    return KForm(a.degree, theta_matrix(D, a.degree) @ a.coeffs)
