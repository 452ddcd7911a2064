"""
Closed-form critical points on the symmetric strata of the parameter cylinder.
"""

from core.strata.axis import (
    D3hShorthands,
    d3h_bifurcation_k,
    d3h_eta_roots,
    d3h_latitude_shorthands,
    d3h_meridian_hessian,
    d3h_spectrum,
)
from core.strata.center import center_circles, center_profile, center_spectrum, center_tensor
from core.strata.disk import (
    d2h_extremum_value,
    d2h_half_angles,
    d2h_locations,
    d2h_spectrum,
    disk_reflection_slopes,
    reflection_matrix,
)
from core.strata.labels import PLANE_ANGLES, TETRAHEDRAL_K, Stratum, StratumLabel, classify_stratum, plane_of
from core.strata.planes import (
    curve_f,
    curve_g,
    generic_coefficients,
    meridian_sines,
    plane_rotation,
    reflection_plane_spectrum,
    reflection_plane_points_at,
    reflection_plane_spectrum_at,
    saddle_latitude,
    third_order_expansion,
)
from core.strata.seeds import longitude_residual, longitude_seeds, stratum_seeds
from core.strata.tetrahedral import (
    NU_M,
    NU_S,
    TETRAHEDRON_VERTICES,
    tetrahedral_locations,
    tetrahedral_spectrum,
    tetrahedral_tensor,
)

__all__ = [
    "D3hShorthands",
    "NU_M",
    "NU_S",
    "PLANE_ANGLES",
    "Stratum",
    "StratumLabel",
    "TETRAHEDRAL_K",
    "TETRAHEDRON_VERTICES",
    "center_circles",
    "center_profile",
    "center_spectrum",
    "center_tensor",
    "classify_stratum",
    "curve_f",
    "curve_g",
    "d2h_extremum_value",
    "d2h_half_angles",
    "d2h_locations",
    "d2h_spectrum",
    "d3h_bifurcation_k",
    "d3h_eta_roots",
    "d3h_latitude_shorthands",
    "d3h_meridian_hessian",
    "d3h_spectrum",
    "disk_reflection_slopes",
    "generic_coefficients",
    "longitude_residual",
    "longitude_seeds",
    "meridian_sines",
    "plane_of",
    "plane_rotation",
    "reflection_matrix",
    "reflection_plane_points_at",
    "reflection_plane_spectrum",
    "reflection_plane_spectrum_at",
    "saddle_latitude",
    "stratum_seeds",
    "tetrahedral_locations",
    "tetrahedral_spectrum",
    "tetrahedral_tensor",
    "third_order_expansion",
]
