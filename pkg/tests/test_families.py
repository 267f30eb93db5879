import io

import numpy as np
import pytest

from g2solv.curvature import pinching_F
from g2solv.errors import InputError
from g2solv.families import (
    FAMILIES,
    catalog,
    extremize_F,
    family,
    laplacian_flow,
    list_families,
    orbit_gradient,
    scan,
    write_flow_csv,
    write_scan_csv,
)
from g2solv.g2core import G2Structure
from g2solv.liealg import AlmostAbelianSpec, closedness_criterion, mu_from_matrix

GRID = np.linspace(0.1, 3.0, 12)


def F_of(obj):
    mu = mu_from_matrix(obj) if isinstance(obj, AlmostAbelianSpec) else obj
    return pinching_F(mu).F


@pytest.mark.parametrize("name", ["A_t", "B_t", "C_t"])
def test_printed_formulas_t(name):
    spec = family(name)
    for t in GRID:
        assert abs(F_of(spec(t=t)) - spec.printed_F(t)) <= 1e-8 * spec.printed_F(t)


def test_printed_formula_mu6():
    spec = family("mu6")
    for a in GRID:
        assert abs(F_of(spec(a=a)) - spec.printed_F(a)) <= 1e-8


def test_printed_formula_ab():
    spec = family("ab")
    for a, b in [(1, -2), (1, 2), (0.3, 0.7), (2, -0.5), (0, 1), (-1, 3)]:
        assert abs(F_of(spec(a=a, b=b)) - spec.printed_F(a, b)) <= 1e-8


def test_D_t_derived_formula():
    """Hand computation from F(A) = |H|^4 / (|H|^4 + |[A, A*]|^2 / 8):
    |H|^2 = t^2 / 2 and |[A, A*]|^2 = 2 t^4 + 2 t^2 (a - b)^2, hence
    F(D_t) = t^4 / (2 t^4 + (a - b)^2 t^2)."""
    for a, b in [(1, 0), (0.5, -0.5), (2, -1), (-0.3, 0.9)]:
        for t in GRID:
            derived = t ** 4 / (2 * t ** 4 + (a - b) ** 2 * t ** 2)
            assert abs(F_of(catalog("D_t", a=a, b=b, t=t)) - derived) <= 1e-8 * derived


def test_reference_brackets():
    assert abs(F_of(catalog("mu_heis")) - 1 / 3) <= 1e-12
    assert abs(F_of(catalog("mu_hyp")) - 7) <= 1e-12
    assert abs(F_of(catalog("mu2")) - 0.5) <= 1e-12
    assert abs(F_of(catalog("normal_form_4")) - 0.8) <= 1e-12
    assert F_of(catalog("zero")) is None


def test_normal_forms_closed():
    cases = {
        "normal_form_1": dict(theta=0.3, beta_re=0.2, beta_im=-0.4),
        "normal_form_2": dict(theta=0.5),
        "normal_form_3": {}, "normal_form_4": {},
        "normal_form_5": dict(a=0.4), "normal_form_6": {},
    }
    for name, p in cases.items():
        res = closedness_criterion(catalog(name, **p))
        assert res["closed"]
        assert res["torsion_free"] == (name == "normal_form_5")


def test_parameter_validation():
    with pytest.raises(InputError):
        catalog("A_t", t=0.0)
    with pytest.raises(InputError):
        catalog("D_t", a=1, b=1, t=1)
    with pytest.raises(InputError):
        catalog("ab", a=0, b=0)
    with pytest.raises(InputError):
        catalog("B_t")
    with pytest.raises(InputError):
        catalog("B_t", t=1, s=2)
    with pytest.raises(InputError, match="valid families"):
        family("nope")
    assert "mu6" in list_families() and set(list_families()) == set(FAMILIES)


def test_scan_rows_and_order():
    grid = {"t": np.arange(1, 21) * 0.05}
    r1 = scan("A_t", grid, classes=False)
    r4 = scan("A_t", grid, classes=False, workers=4)
    assert len(r1) == 20
    assert [r.params for r in r1] == [r.params for r in r4]
    assert [r.F for r in r1] == [r.F for r in r4]
    for r in r1:
        t = r.params["t"]
        assert abs(r.F - t * t / (t * t + 1)) <= 1e-10
        assert abs(r.scal + 0.5 * r.tau_norm2) <= 1e-9
    assert r1.F_sup == max(r.F for r in r1) and r1.argmax == {"t": 1.0}


def test_scan_partial_failure_and_csv():
    res = scan("mu6", {"a": [0.0, 1.0]})
    assert res.rows[0].error is not None and res.rows[1].error is None
    assert "C" in res.rows[1].class_flags
    buf = io.StringIO()
    write_scan_csv(res, buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == ("param:a,F,scal,tau_norm2,class_flags,lap_soliton_residual,"
                        "lap_soliton_c,erp_residual")
    assert len(lines) == 3
    assert lines[2].startswith("1,0.80000000000000")


def test_extremize_monotone_and_endpoint():
    res = extremize_F(catalog("mu6", a=2.0), "max")
    assert res.converged and abs(res.F - 0.8) <= 1e-6
    assert np.all(np.diff(res.trace) >= -1e-15)
    assert res.grad_norm <= 1e-8
    assert abs(res.F_pipeline - res.F) <= 1e-8


def test_extremize_descent_flags_degeneration():
    res = extremize_F(catalog("A_t", t=0.5), "min", max_iter=2000)
    assert np.all(np.diff(res.trace) <= 1e-15)
    assert res.F < 1e-3
    assert res.degenerates and res.notes


def test_extremize_input_checks():
    with pytest.raises(InputError):
        extremize_F(np.eye(3), "max")
    with pytest.raises(InputError):
        extremize_F(catalog("B_t", t=1), "sideways")


def test_orbit_gradient_vanishes_at_normal():
    A = catalog("B_t", t=0.5).complex3
    assert np.linalg.norm(orbit_gradient(A)) <= 1e-8


def test_flow_short_run():
    g = G2Structure(mu_from_matrix(catalog("ab", a=1, b=2)))
    res = laplacian_flow(g, 0.05, 0.005)
    assert len(res) == 11 and not res.truncated
    assert max(s.closed_drift for s in res.samples) <= 1e-8
    assert res.monotonicity == "increasing"
    buf = io.StringIO()
    write_flow_csv(res, buf)
    lines = buf.getvalue().splitlines()
    assert lines[0] == "t,F,tau_norm2,dt" and len(lines) == 12


def test_flow_rejects_bad_input():
    with pytest.raises(InputError):
        laplacian_flow(G2Structure(catalog("mu_hyp")), 1.0, 0.1)
    with pytest.raises(InputError):
        laplacian_flow(G2Structure(catalog("zero")), -1.0, 0.1)


def test_flow_truncates_when_steps_fail(monkeypatch):
    from g2solv.errors import NotPositiveError
    from g2solv.families import flow

    calls = {"n": 0}
    real = flow._rhs

    def flaky(mu, phi):
        calls["n"] += 1
        if calls["n"] > 8:
            raise NotPositiveError("forced")
        return real(mu, phi)

    monkeypatch.setattr(flow, "_rhs", flaky)
    g = G2Structure(mu_from_matrix(catalog("ab", a=1, b=2)))
    res = laplacian_flow(g, 1.0, 0.01, max_halvings=3)
    assert res.truncated and not res.aborted and len(res) == 3
    assert "rejected" in res.message
