import math
from functools import partial

import numpy as np
import pytest

from core.orientation import CHI_HIGH, CHI_LOW, OrientedParams, params_tensor
from core.separatrix import (
    SectionSample,
    SeparatrixSection,
    assemble_surface,
    polish_fold,
    sector_chi,
    separatrix_tag,
    surface_count,
    trace_section,
)
from core.solver import locate_critical_points
from core.strata import curve_f, curve_g
from core.tensor import chart_hessian, spherical_gradient


def test_separatrix_tags_follow_the_count():
    assert separatrix_tag(10, 0.5) == "S1"
    assert separatrix_tag(12, 0.5) == "S2"
    assert separatrix_tag(8, 1.0) == "L1"
    assert separatrix_tag(10, 2.0) == "L2"
    assert separatrix_tag(14, 0.5) == ""


def test_sector_chi_uses_the_rotation_images():
    assert sector_chi(math.pi / 2) == pytest.approx(-math.pi / 6)
    assert sector_chi(-math.pi / 2) == pytest.approx(-math.pi / 2)
    assert CHI_LOW <= sector_chi(1.0) <= CHI_HIGH


def test_sample_columns_from_tag_and_band():
    s1 = SectionSample(rho=0.5, k_crit=0.2, count=10, tag="S1")
    s2 = SectionSample(rho=1.4, k_crit=0.6, count=12, tag="S2", band=(0.59, 0.61))

    assert s1.k_s1 == 0.2
    assert s1.k_s2 == (None, None)
    assert s2.k_s1 is None
    assert s2.k_s2 == (0.59, 0.61)
    assert SectionSample(rho=1.4, k_crit=0.6, tag="S2").k_s2 == (0.6, 0.6)
    assert s2.to_dict()["K_s2_outer"] == 0.61


def test_assemble_surface_collects_cusps_and_the_boundary_arc():
    low = SeparatrixSection(
        chi=CHI_LOW,
        samples=[SectionSample(rho=1.0, k_crit=0.0, count=8, tag="L1")],
        cusp=(1.0, 0.0),
    )
    high = SeparatrixSection(
        chi=CHI_HIGH,
        samples=[SectionSample(rho=2.0, k_crit=1.0, count=10, tag="L2")],
    )

    surface = assemble_surface([high, low], lambda k, rho, chi: 10)

    assert [s.chi for s in surface.sections] == [CHI_LOW, CHI_HIGH]
    assert surface.cusp_line == [(0.0, 1.0, CHI_LOW)]
    assert (0.0, 2.0, CHI_LOW) in surface.boundary_line
    arc = [k for k, rho, chi in surface.boundary_line if chi == CHI_HIGH and rho == 2.0]
    assert max(arc) == pytest.approx(1.0)
    assert len(arc) >= 5
    assert set(surface.to_dict()) == {"sections", "L1", "L2"}


def test_trace_section_starts_at_the_origin(trace_cfg):
    section = trace_section(-math.pi / 2, [0.0], trace_cfg)

    assert section.samples[0].k_crit == 0.0
    assert section.curve()[1].tolist() == [0.0]


@pytest.mark.slow
def test_section_on_the_lower_plane_follows_g(trace_cfg):
    section = trace_section(-math.pi / 2, [0.8], trace_cfg)

    assert section.chi == pytest.approx(-math.pi / 2)
    assert section.samples[0].k_crit == pytest.approx(curve_g(0.8), abs=1e-4)
    assert curve_g(0.8) == pytest.approx(0.12812, abs=1e-5)


@pytest.mark.slow
def test_section_on_the_upper_plane_follows_f(trace_cfg):
    section = trace_section(-math.pi / 6, [1.0], trace_cfg)

    assert section.samples[0].k_crit == pytest.approx(curve_f(1.0), abs=1e-4)
    assert curve_f(1.0) == pytest.approx(math.sqrt(4 / 21))


@pytest.mark.slow
def test_polish_fold_solves_the_bordered_system_in_the_bulk(trace_cfg):
    rho, chi = 0.5, -1.0
    sample = trace_section(chi, [rho], trace_cfg).samples[0]
    k = sample.k_crit + 1e-4
    points = locate_critical_points(OrientedParams(k, rho, chi), trace_cfg)

    result = polish_fold(points, k, rho, chi)

    assert result is not None
    k_star, location = result
    t = params_tensor(OrientedParams(k_star, rho, chi))
    assert k_star == pytest.approx(sample.k_crit, abs=1e-4)
    assert np.linalg.norm(spherical_gradient(t, location)) < 1e-9
    assert abs(np.linalg.det(chart_hessian(t, location))) < 1e-7


def test_assemble_surface_drops_rim_points_whose_count_is_not_ten():
    high = SeparatrixSection(chi=CHI_HIGH, samples=[SectionSample(rho=1.98, k_crit=1.0, count=10, tag="S1")])

    def count(k, rho, chi):
        return 12 if k == pytest.approx(0.5) else 10

    surface = assemble_surface([high], count)

    assert (0.5, 2.0, CHI_HIGH) not in surface.boundary_line
    assert (0.25, 2.0, CHI_HIGH) in surface.boundary_line
    assert (1.0, 2.0, CHI_HIGH) in surface.boundary_line


def test_assemble_surface_skips_the_arc_without_a_sample_near_the_rim():
    high = SeparatrixSection(chi=CHI_HIGH, samples=[SectionSample(rho=1.5, k_crit=0.8, count=10, tag="S1")])

    surface = assemble_surface([high], lambda k, rho, chi: 10)

    assert surface.boundary_line == [(0.0, 2.0, CHI_HIGH)]


@pytest.mark.slow
def test_boundary_arc_counts_ten_points_on_the_rim(trace_cfg):
    low = SeparatrixSection(chi=CHI_LOW, samples=[SectionSample(rho=1.0, k_crit=0.0, count=8, tag="L1")])
    high = SeparatrixSection(
        chi=CHI_HIGH, samples=[SectionSample(rho=1.999, k_crit=curve_f(1.999), count=10, tag="S1")]
    )

    surface = assemble_surface([low, high], partial(surface_count, cfg=trace_cfg))

    arc = sorted(k for k, rho, chi in surface.boundary_line if chi == CHI_HIGH)
    assert (0.0, 2.0, CHI_LOW) in surface.boundary_line
    assert len(arc) == 5
    assert arc[-1] == pytest.approx(curve_f(1.999))


@pytest.mark.slow
@pytest.mark.parametrize("chi, curve", [(-math.pi / 2, curve_g), (-math.pi / 6, curve_f)])
def test_sections_on_the_reflection_planes_follow_the_closed_curves(trace_cfg, chi, curve):
    rhos = np.linspace(0.1, 1.9, 19)

    section = trace_section(chi, rhos, trace_cfg)

    for sample in section.samples:
        assert sample.k_crit == pytest.approx(curve(sample.rho), abs=1e-4)


@pytest.mark.slow
def test_lower_plane_section_has_its_cusp_at_rho_one(trace_cfg):
    section = trace_section(-math.pi / 2, [0.95, 1.0, 1.05], trace_cfg)

    middle = section.samples[1]
    assert middle.rho == 1.0
    assert middle.k_crit == pytest.approx(0.0, abs=1e-4)
    assert middle.tag == "L1"
    assert section.cusp == (1.0, 0.0)


@pytest.mark.slow
def test_upper_plane_section_reaches_k_one_at_the_rim(trace_cfg):
    section = trace_section(-math.pi / 6, [1.999], trace_cfg)

    k_rim = section.samples[0].k_crit
    assert k_rim == pytest.approx(curve_f(1.999), abs=1e-4)
    assert k_rim == pytest.approx(1.0, abs=1e-3)
