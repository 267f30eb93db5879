"""Structure input parsing and the full analysis report."""
from __future__ import annotations

import json
import math

import numpy as np

from .curvature import pinching_F, ricci, ricci_soliton_residual, solvsoliton_check_aa
from .errors import InputError, NotPositiveError
from .exterior import DIM
from .g2core import DEFAULT_TOL, G2Structure, classify, erp_residual, torsion_forms
from .liealg import (
    AlmostAbelianSpec,
    LieBracket,
    _check_lie,
    closedness_criterion,
    mu_from_matrix,
    spectral_type,
    structure_flags,
)
from .solitonlab import eigenform_fit, laplacian_soliton_fit

__all__ = ["SCHEMA_VERSION", "parse_structure", "load_structure", "analysis_report", "to_jsonable"]

SCHEMA_VERSION = 1


def _complex_entry(v):
    if isinstance(v, dict):
        extra = set(v) - {"re", "im"}
        if extra:
            raise InputError(f"complex entry has unknown keys {sorted(extra)}")
        return complex(float(v.get("re", 0.0)), float(v.get("im", 0.0)))
    if isinstance(v, (int, float)) and not isinstance(v, bool):
        return complex(float(v), 0.0)
    raise InputError(f"cannot read complex entry {v!r}")


def _matrix(rows, n, conv):
    if not isinstance(rows, list) or len(rows) != n or any(
            not isinstance(r, list) or len(r) != n for r in rows):
        raise InputError(f"expected a {n}x{n} nested list")
    return np.array([[conv(v) for v in r] for r in rows])


def parse_structure(doc):
    """Parse the JSON input document.

    Accepted shapes::

        {"dim": 7, "brackets": [{"i": 1, "j": 2, "k": 3, "c": 1.0}, ...]}
        {"almost_abelian": {"complex": [[{"re": 0, "im": 0}, ...], ...]}}
        {"almost_abelian": {"real6": [[...], ...]}}   (or top-level "real6")

    Indices are 1-based with i < j.  Returns a LieBracket or an
    AlmostAbelianSpec; the Jacobi identity is checked for brackets.
    """
    if not isinstance(doc, dict):
        raise InputError("input must be a JSON object")
    if "real6" in doc and "almost_abelian" not in doc:
        doc = {"almost_abelian": {"real6": doc["real6"]}}
    if "almost_abelian" in doc:
        aa = doc["almost_abelian"]
        if not isinstance(aa, dict) or len(set(aa) & {"complex", "real6"}) != 1:
            raise InputError('almost_abelian needs exactly one of "complex" or "real6"')
        if "complex" in aa:
            return AlmostAbelianSpec.from_complex(_matrix(aa["complex"], 3, _complex_entry))
        return AlmostAbelianSpec.from_real(_matrix(aa["real6"], 6, float))
    if "brackets" not in doc:
        raise InputError('input needs "brackets" or "almost_abelian"')
    if doc.get("dim", DIM) != DIM:
        raise InputError(f"only dim = {DIM} is supported")
    c = np.zeros((DIM, DIM, DIM))
    for n, t in enumerate(doc["brackets"]):
        try:
            i, j, k, v = int(t["i"]), int(t["j"]), int(t["k"]), float(t["c"])
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"bracket entry {n} is malformed: {t!r}") from exc
        if not (1 <= i < j <= DIM and 1 <= k <= DIM):
            raise InputError(f"bracket entry {n}: need 1 <= i < j <= 7 and 1 <= k <= 7")
        c[i - 1, j - 1, k - 1] += v
    mu = LieBracket(c)
    _check_lie(mu)
    return mu


def load_structure(path):
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed JSON in {path}: {exc}") from exc
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    return parse_structure(doc)


def to_jsonable(x):
    """Plain JSON types; non-finite floats become null."""
    if isinstance(x, dict):
        return {str(k): to_jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple, set)):
        items = sorted(x) if isinstance(x, set) else x
        return [to_jsonable(v) for v in items]
    if isinstance(x, np.ndarray):
        return to_jsonable(x.tolist())
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, complex):
        return {"re": to_jsonable(x.real), "im": to_jsonable(x.imag)}
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return x if math.isfinite(x) else None
    return x


def _echo(obj, source):
    if isinstance(obj, AlmostAbelianSpec):
        out = {"kind": "almost_abelian", "real6": obj.real6}
        if obj.is_complex_linear:
            out["complex"] = [[complex(v) for v in r] for r in obj.complex3]
    else:
        out = {"kind": "brackets", "brackets": [
            {"i": i, "j": j, "k": k, "c": v} for i, j, k, v in obj.to_terms()]}
    out["source"] = source
    return out


def analysis_report(obj, tol: float = DEFAULT_TOL, seed: int = 0, source=None) -> dict:
    """Every invariant the library computes for one structure (mu, phi_0).

    Quantities that do not apply (F on flat brackets, soliton fits and ERP
    on non-closed structures) are reported as None.
    """
    spec = obj if isinstance(obj, AlmostAbelianSpec) else None
    mu = mu_from_matrix(obj) if spec is not None else obj
    _check_lie(mu)
    g = G2Structure(mu)
    closed = g.is_closed(tol)
    tfree = g.is_torsion_free(tol)
    rd = ricci(mu)
    pr = pinching_F(mu, tol)
    rep = {
        "schema": SCHEMA_VERSION,
        "input": _echo(obj, source),
        "tolerances": {"tol": tol, "dual_route": 1e-9, "soliton": 1e-7, "seed": seed},
        "structure_flags": structure_flags(mu),
        "norm": mu.norm(),
        "closed": closed,
        "torsion_free": tfree,
        "scal": rd.scal,
        "ric_eigenvalues": rd.eigenvalues,
        "F": pr.F,
        "flat": pr.flat,
    }
    if closed:
        rep["tau_norm2"] = g.tau_norm2
        rep["scal_plus_half_tau_norm2"] = rd.scal + 0.5 * g.tau_norm2
    else:
        t = torsion_forms(g)
        rep["tau_norm2"] = None
        rep["torsion_forms"] = {"tau0": t.tau0, "tau1_norm": t.tau1.norm(),
                                "tau2_norm": t.tau2.norm(), "tau3_norm": t.tau3.norm()}
    rep["class_flags"] = sorted(classify(g, tol))
    ef = eigenform_fit(g)
    rep["eigenform"] = {"c": ef.c, "residual": ef.residual}
    if closed:
        ls = laplacian_soliton_fit(g)
        rep["laplacian_soliton"] = {"c": ls.c, "residual": ls.residual, "kind": ls.kind,
                                    "D": ls.D, "note": ls.note}
        erp = erp_residual(g, tol)
        rep["erp"] = {"residual": erp.residual, "trivially_satisfied": erp.trivially_satisfied}
    else:
        rep["laplacian_soliton"] = None
        rep["erp"] = None
    rs = ricci_soliton_residual(mu)
    rep["ricci_soliton"] = {"c": rs.c, "residual": rs.residual,
                            "symmetric_defect": rs.symmetric_defect, "D": rs.D}
    st = spectral_type(spec if spec is not None else mu, seed=seed)
    rep["spectral_type"] = {k: v for k, v in st.items() if k != "eigenvalues"}
    if spec is not None:
        rep["spectral_type"]["eigenvalues"] = [complex(v) for v in st["eigenvalues"]]
        rep["almost_abelian"] = {
            "closedness": closedness_criterion(spec),
            "solvsoliton": solvsoliton_check_aa(spec, tol),
        }
    return rep
