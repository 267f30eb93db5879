"""Catalog of parametrized examples, scans, orbit extremization and the Laplacian flow."""
from .catalog import FAMILIES, FamilySpec, Param, catalog, family, list_families
from .extremize import ExtremizeResult, extremize_F, orbit_gradient
from .flow import FlowResult, FlowSample, laplacian_flow, write_flow_csv
from .scan import ScanResult, ScanRow, evaluate_point, scan, write_scan_csv

__all__ = [
    "FAMILIES", "FamilySpec", "Param", "catalog", "family", "list_families",
    "ExtremizeResult", "extremize_F", "orbit_gradient",
    "FlowResult", "FlowSample", "laplacian_flow", "write_flow_csv",
    "ScanResult", "ScanRow", "evaluate_point", "scan", "write_scan_csv",
]
