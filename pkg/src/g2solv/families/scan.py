"""Grid scans of a family: F, scal, |tau|^2, classes and soliton residuals per point."""
from __future__ import annotations

import csv
import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ..curvature import pinching_F, ricci
from ..g2core import G2Structure, classify, erp_residual
from ..liealg import AlmostAbelianSpec, LieBracket, mu_from_matrix
from ..solitonlab import laplacian_soliton_fit
from .catalog import FamilySpec, family

__all__ = ["ScanRow", "ScanResult", "scan", "write_scan_csv", "evaluate_point", "SCAN_COLUMNS"]

SCAN_COLUMNS = ("F", "scal", "tau_norm2", "class_flags",
                "lap_soliton_residual", "lap_soliton_c", "erp_residual")


@dataclass
class ScanRow:
    params: dict
    F: Optional[float] = None
    scal: Optional[float] = None
    tau_norm2: Optional[float] = None
    class_flags: tuple = ()
    lap_soliton_residual: Optional[float] = None
    lap_soliton_c: Optional[float] = None
    erp_residual: Optional[float] = None
    printed_F: Optional[float] = None
    spectrum: Optional[np.ndarray] = field(default=None, repr=False)
    error: Optional[str] = None


@dataclass
class ScanResult:
    family: str
    rows: list

    def __iter__(self):
        return iter(self.rows)

    def __len__(self):
        return len(self.rows)

    def _valid(self):
        return [r for r in self.rows if r.F is not None]

    @property
    def F_inf(self) -> Optional[float]:
        """Empirical infimum of F over the grid (an estimate, not a bound)."""
        v = self._valid()
        return min(r.F for r in v) if v else None

    @property
    def F_sup(self) -> Optional[float]:
        v = self._valid()
        return max(r.F for r in v) if v else None

    @property
    def argmax(self) -> Optional[dict]:
        v = self._valid()
        return max(v, key=lambda r: r.F).params if v else None

    @property
    def argmin(self) -> Optional[dict]:
        v = self._valid()
        return min(v, key=lambda r: r.F).params if v else None


def evaluate_point(spec: FamilySpec, params: dict, classes: bool = True) -> ScanRow:
    """Evaluate one grid point; failures are recorded in the row."""
    row = ScanRow(dict(params))
    try:
        obj = spec(**params)
        mu = mu_from_matrix(obj) if isinstance(obj, AlmostAbelianSpec) else obj
        if isinstance(obj, AlmostAbelianSpec):
            row.spectrum = np.linalg.eigvals(obj.complex3) if obj.is_complex_linear else None
        if spec.printed_F is not None:
            row.printed_F = float(spec.printed_F(**params))
        pr = pinching_F(mu)
        row.F = pr.F
        row.scal = ricci(mu).scal
        g = G2Structure(mu)
        row.tau_norm2 = g.tau_norm2
        if g.is_closed():
            fit = laplacian_soliton_fit(g)
            row.lap_soliton_residual = fit.residual
            row.lap_soliton_c = fit.c
            erp = erp_residual(g)
            row.erp_residual = erp.residual
        if classes:
            row.class_flags = tuple(sorted(classify(g)))
    except Exception as exc:  # per-point failure, scan continues
        row.error = f"{type(exc).__name__}: {exc}"
    return row


def _grid_points(grid: dict, fixed: dict):
    names = list(grid)
    for combo in itertools.product(*(np.asarray(grid[n], dtype=float) for n in names)):
        p = dict(fixed)
        p.update({n: float(v) for n, v in zip(names, combo)})
        yield p


def scan(family_name, grid: dict, fixed: Optional[dict] = None,
         classes: bool = True, workers: int = 1) -> ScanResult:
    """Evaluate a family on the Cartesian product of ``grid`` values.

    Rows come back in grid order regardless of ``workers``.
    """
    spec = family_name if isinstance(family_name, FamilySpec) else family(family_name)
    points = list(_grid_points(grid, fixed or {}))
    if workers > 1:
        with ThreadPoolExecutor(workers) as ex:
            rows = list(ex.map(lambda p: evaluate_point(spec, p, classes), points))
    else:
        rows = [evaluate_point(spec, p, classes) for p in points]
    return ScanResult(spec.name, rows)


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, float):
        return format(v, ".17g")
    return str(v)


def write_scan_csv(result: ScanResult, fh) -> None:
    """One header row; ``param:<name>`` columns first, then SCAN_COLUMNS."""
    pnames = list(result.rows[0].params) if result.rows else []
    w = csv.writer(fh)
    w.writerow([f"param:{p}" for p in pnames] + list(SCAN_COLUMNS))
    for r in result.rows:
        w.writerow(
            [_fmt(r.params[p]) for p in pnames]
            + [_fmt(r.F), _fmt(r.scal), _fmt(r.tau_norm2), " ".join(r.class_flags),
               _fmt(r.lap_soliton_residual), _fmt(r.lap_soliton_c), _fmt(r.erp_residual)]
        )
