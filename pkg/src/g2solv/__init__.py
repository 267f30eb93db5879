"""Left-invariant G2-structures on 7-dimensional solvable Lie groups.

Torsion, Ricci curvature, the pinching functional F = scal^2/|Ric|^2,
Laplacian and Ricci solitons, and the Laplacian flow, all computed from
structure constants in a fixed basis.
"""
from .curvature import (
    F_almost_abelian,
    einstein_residual,
    pinching_F,
    ricci,
    ricci_closed_form,
    ricci_oracle,
    ricci_soliton_residual,
    solvsoliton_check_aa,
)
from .errors import G2Error, InconsistencyError, InputError, NotClosedError, NotPositiveError
from .exterior import KForm, hodge, wedge
from .g2core import (
    PHI,
    PSI,
    G2Structure,
    classify,
    erp_residual,
    laplacian_phi,
    metric_from_threeform,
    torsion_forms,
    torsion_two_form,
)
from .liealg import (
    AlmostAbelianSpec,
    LieBracket,
    ce_differential,
    closedness_criterion,
    derivations,
    mu_from_matrix,
    spectral_type,
    structure_flags,
)
from .solitonlab import eigenform_fit, laplacian_soliton_fit

__version__ = "0.1.0"
