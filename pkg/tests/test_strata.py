import math

import numpy as np
import pytest

from core.critical import MorseType, index_sum
from core.errors import NonPositiveK, OutsideCylinder
from core.orientation import OrientedParams, from_cylinder
from core.sphere import riemannian_gradient
from core.strata import (
    NU_M,
    NU_S,
    Stratum,
    center_circles,
    center_spectrum,
    center_tensor,
    classify_stratum,
    curve_f,
    curve_g,
    d2h_extremum_value,
    d2h_half_angles,
    d2h_spectrum,
    d3h_bifurcation_k,
    d3h_latitude_shorthands,
    d3h_spectrum,
    disk_reflection_slopes,
    longitude_residual,
    reflection_matrix,
    reflection_plane_spectrum,
    reflection_plane_spectrum_at,
    saddle_latitude,
    tetrahedral_spectrum,
    tetrahedral_tensor,
    third_order_expansion,
)
from core.tensor import potential, to_cartesian


def max_residual(t, points):
    xs = np.array([cp.cartesian() for cp in points])
    return float(np.linalg.norm(riemannian_gradient(t.full, xs), axis=1).max())


def located(points, theta1, theta2, tol=1e-9):
    target = to_cartesian(theta1, theta2)
    return [cp for cp in points if np.linalg.norm(cp.cartesian() - target) < tol]


def assert_antipodal(points):
    for cp in points:
        partner = [q for q in points if np.linalg.norm(q.cartesian() + cp.cartesian()) < 1e-8]
        assert len(partner) == 1
        assert partner[0].value == pytest.approx(-cp.value, abs=1e-10)


def test_classify_stratum_examples():
    assert classify_stratum(OrientedParams(1 / math.sqrt(2), 0.0, 0.0)).stratum is Stratum.TETRAHEDRAL
    assert classify_stratum(OrientedParams(0.0, 0.0, 0.0)).stratum is Stratum.CENTER
    label = classify_stratum(OrientedParams(0.3, 0.7, -math.pi / 2))
    assert label.stratum is Stratum.REFLECTION_PLANE
    assert label.name == "ReflectionPlane(P0)"
    assert classify_stratum(OrientedParams(0.0, 0.7, 0.4)).stratum is Stratum.DISK
    assert classify_stratum(OrientedParams(0.3, 0.0, 0.4)).stratum is Stratum.AXIS
    assert classify_stratum(OrientedParams(0.3, 0.7, -1.0)).stratum is Stratum.BULK


def test_tetrahedral_spectrum_has_fourteen_points_with_unit_values(cfg):
    points = tetrahedral_spectrum(cfg)

    assert len(points) == 14
    assert sorted(round(cp.value, 12) for cp in points) == [-1.0] * 4 + [0.0] * 6 + [1.0] * 4
    assert max_residual(tetrahedral_tensor(), points) < 1e-12
    assert index_sum(points) == 2
    assert_antipodal(points)


def test_tetrahedral_maxima_and_saddles_sit_where_expected(cfg):
    points = tetrahedral_spectrum(cfg)

    north = located(points, math.pi / 2, 0.0)
    assert north[0].morse_type is MorseType.MAX
    southern_max = located(points, -NU_M, math.pi / 2)
    assert southern_max[0].morse_type is MorseType.MAX
    assert southern_max[0].value == pytest.approx(1.0)
    saddle = located(points, -NU_S, -math.pi / 2)
    assert saddle[0].morse_type is MorseType.SADDLE
    assert saddle[0].value == pytest.approx(0.0, abs=1e-12)


def test_center_spectrum_has_poles_and_two_circles(cfg):
    points, circles = center_spectrum(cfg)

    assert len(points) == 2
    assert index_sum(points) == 2
    assert [c.kind for c in circles] == ["max", "min"]
    maxima = circles[0]
    assert maxima.theta1 == pytest.approx(-math.acos(2 / math.sqrt(5)))
    assert maxima.value == pytest.approx(1 / math.sqrt(5))
    assert maxima.multiplier == pytest.approx(3 / math.sqrt(5))


def test_center_circles_are_critical_everywhere():
    t = center_tensor()
    for circle in center_circles():
        theta2 = np.linspace(-math.pi, math.pi, 17)
        xs = to_cartesian(np.full_like(theta2, circle.theta1), theta2)
        assert np.abs(riemannian_gradient(t.full, xs)).max() < 1e-12
        assert np.allclose(potential(t, xs), circle.value)


def test_d3h_shorthands_at_the_tetrahedral_value():
    s = d3h_latitude_shorthands(1 / math.sqrt(2))

    assert s.zeta_minus == pytest.approx(1.0, abs=1e-12)
    assert s.zeta_plus == pytest.approx(0.0, abs=1e-12)
    assert s.tau_minus == pytest.approx(NU_M, abs=1e-12)
    assert d3h_bifurcation_k() == pytest.approx(1 / math.sqrt(2), abs=1e-10)


def test_d3h_spectrum_residuals_and_monotone_saddle_value(cfg):
    previous = -math.inf
    for k in (0.2, 0.5, 0.9, 1.4):
        points = d3h_spectrum(k, cfg)
        assert len(points) == 14
        assert max_residual(from_cylinder(k, 0.0, -math.pi / 2), points) < 1e-11
        assert index_sum(points) == 2
        zeta_plus = d3h_latitude_shorthands(k).zeta_plus
        assert zeta_plus > previous
        previous = zeta_plus


def test_d3h_requires_positive_k():
    with pytest.raises(NonPositiveK):
        d3h_spectrum(0.0)


def test_d2h_maxima_value_and_count_below_rho_one(cfg):
    points = d2h_spectrum(0.5, math.pi / 2, cfg)
    r_plus, _ = d2h_half_angles(0.5)

    assert len(points) == 10
    assert r_plus == pytest.approx(0.5 * math.acos(3.5 / 6.5))
    secondary = [cp for cp in points if cp.morse_type is MorseType.MAX and cp.location.theta1 < 0]
    assert len(secondary) == 2
    for cp in secondary:
        assert cp.value == pytest.approx(1.5 * math.sin(r_plus))
        assert cp.location.theta1 == pytest.approx(-r_plus)
    assert d2h_extremum_value(0.5) == pytest.approx(1.5 * math.sin(r_plus))
    assert_antipodal(points)


def test_d2h_merges_saddles_into_monkey_saddles_at_rho_one(cfg):
    points = d2h_spectrum(1.0, -math.pi / 2, cfg)

    monkey = [cp for cp in points if cp.index == -2]
    assert len(points) == 8
    assert len(monkey) == 2
    assert all(abs(cp.location.theta1) < 1e-9 for cp in monkey)
    assert index_sum(points) == 2


def test_d2h_equatorial_saddles_above_rho_one(cfg):
    points = d2h_spectrum(1.5, 0.0, cfg)
    equatorial = [cp for cp in points if abs(cp.location.theta1) < 1e-12]

    assert len(points) == 10
    assert len(equatorial) == 4
    assert all(cp.morse_type is MorseType.SADDLE and abs(cp.value) < 1e-12 for cp in equatorial)
    assert max_residual(from_cylinder(0.0, 1.5, 0.0), points) < 1e-11


def test_d2h_rejects_zero_rho():
    with pytest.raises(OutsideCylinder):
        d2h_spectrum(0.0, 0.0)


def test_disk_reflections_leave_the_potential_invariant():
    chi = -1.1
    t = from_cylinder(0.0, 0.8, chi)
    xs = to_cartesian(np.array([0.2, -0.5, 1.0]), np.array([0.3, 2.2, -1.7]))
    for m in disk_reflection_slopes(chi):
        mirrored = xs @ reflection_matrix(m).T
        assert np.allclose(potential(t, mirrored), potential(t, xs), atol=1e-13)


def test_curves_f_and_g_values():
    assert curve_f(2.0) == pytest.approx(1.0)
    assert curve_f(0.5) == pytest.approx(0.196, abs=5e-4)
    assert curve_g(1.0) == 0.0
    assert curve_g(1.5) == pytest.approx(1 / math.sqrt(2))
    assert curve_g(0.8) == pytest.approx(math.sqrt(2 * 0.64 * 0.2 / (3 * 5.2)))
    assert curve_f(0.0) == curve_g(0.0) == curve_g(2.0) == 0.0
    with pytest.raises(OutsideCylinder):
        curve_f(2.1)


def test_reflection_plane_counts_around_f(cfg):
    assert len(reflection_plane_spectrum(0.5, 0.5, 1, cfg)) == 14
    assert len(reflection_plane_spectrum(0.1, 0.5, 1, cfg)) == 10


def test_reflection_plane_counts_around_g(cfg):
    assert len(reflection_plane_spectrum(0.3, 0.8, -1, cfg)) == 14
    assert len(reflection_plane_spectrum(0.05, 0.8, -1, cfg)) == 10


def test_degenerate_points_on_g_above_rho_one(cfg):
    rho = 1.5
    points = reflection_plane_spectrum(curve_g(rho), rho, -1, cfg)
    flat = [cp for cp in points if cp.index == 0]

    assert saddle_latitude(rho) == pytest.approx(-math.asin(1 / math.sqrt(3)))
    assert len(points) == 12
    assert len(flat) == 2
    assert any(abs(cp.location.theta1 - saddle_latitude(rho)) < 1e-6 for cp in flat)
    assert index_sum(points) == 2


def test_eight_points_at_the_cusp(cfg):
    points = reflection_plane_spectrum(curve_g(1.0), 1.0, -1, cfg)

    assert len(points) == 8
    assert sorted(cp.index for cp in points).count(-2) == 2


def test_rotated_reflection_planes_match_the_base_plane(cfg):
    base = reflection_plane_spectrum(0.3, 0.7, 1, cfg)
    rotated = reflection_plane_spectrum_at(0.3, 0.7, math.pi / 2 + 2 * math.pi / 3, cfg)

    assert len(rotated) == len(base)
    assert sorted(cp.value for cp in rotated) == pytest.approx(sorted(cp.value for cp in base), abs=1e-10)
    t = from_cylinder(0.3, 0.7, math.pi / 2 + 2 * math.pi / 3)
    assert max_residual(t, rotated) < 1e-10


def test_third_order_expansion_closed_form():
    coeffs = third_order_expansion(1.5)

    assert coeffs["constant"] == pytest.approx(-math.sqrt(3) / 2)
    assert coeffs["22"] == pytest.approx(6 / math.sqrt(3))
    with pytest.raises(OutsideCylinder):
        third_order_expansion(0.5)


def test_longitude_residual_vanishes_at_bulk_critical_points(cfg):
    from core.solver import solve_spectrum

    p = OrientedParams(0.4, 0.5, -1.0)
    assert solve_spectrum(p, cfg).count >= 10
    for cp in solve_spectrum(p, cfg).points:
        if cp.location.is_polar():
            continue
        scale = float(np.abs(longitude_residual(np.linspace(-math.pi, math.pi, 64), p.k, p.rho, p.chi)).max())
        assert abs(float(longitude_residual(cp.location.theta2, p.k, p.rho, p.chi))) < 1e-8 * scale
