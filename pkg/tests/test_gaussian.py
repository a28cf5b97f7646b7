import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from lvic.errors import UndefinedGap
from lvic.gaussian import (GapReport, GaussianGains, GdofAlpha, codegap_check, codegap_report,
                           gap_delta, gauss_to_ldic, gaussian_hk_component_polytope,
                           gaussian_tdm_boundary, gaussian_tdm_region, gdof_region)
from lvic.geometry import regions_equal
from lvic.ldic import DeterministicGains, tdm_region

LOG6 = math.log2(6)
RUNNING = DeterministicGains(7, 3, 2, 2)


def test_gain_map():
    H = GaussianGains.from_powers((128, 8, 4, 4), (0.3, 1.0, -2.0, 0.1))
    assert gauss_to_ldic(H) == RUNNING
    assert gauss_to_ldic(GaussianGains.from_powers((127.9, 0.5, 1, 0))).as_tuple() == (6, 0, 0, 0)
    assert GaussianGains(3 + 4j, 0, 0, 1).power("aa") == 25


@given(st.integers(0, 40), st.floats(0, 0.999), st.floats(-math.pi, math.pi))
def test_gain_map_floor(k, frac, phase):
    H = GaussianGains.from_powers((2.0 ** k * (1 + frac), 1, 1, 1), (phase, 0, 0, 0))
    assert gauss_to_ldic(H).g_aa == k


def test_gaussian_tdm():
    H = GaussianGains.from_powers((255, 1, 1, 15))
    region = gaussian_tdm_region(H)
    assert region.contains_point((8, 0)) and region.contains_point((0, 4))
    assert region.contains_point((4, 2)) and not region.contains_point((4.1, 2.1))
    assert region.support({"r_a": 1.0}) == pytest.approx(8)
    assert gaussian_tdm_boundary(H, 0.25) == pytest.approx((6, 1))


def test_interference_free_hk():
    H = GaussianGains.from_powers((100, 0, 0, 30))
    poly = gaussian_hk_component_polytope(H)
    assert poly.bound_of("ap") == pytest.approx(math.log2(101))
    assert poly.bound_of("ac") == pytest.approx(0)
    assert codegap_check(H) <= 1


powers = st.floats(0, 10).map(lambda e: 2.0 ** e)
phases = st.floats(-math.pi, math.pi)


@given(st.tuples(powers, powers, powers, powers), st.tuples(phases, phases, phases, phases))
def test_code_gap_at_most_two_bits(p, ph):
    report = codegap_report(GaussianGains.from_powers(p, ph))
    assert report.deviation <= 2
    assert report.worst_constraint_gap <= 2


def test_gap_table_rows():
    assert gap_delta(4, RUNNING).delta_bits == pytest.approx(LOG6, abs=1e-12)
    for k in (6, 7):
        assert gap_delta(k, RUNNING).delta_bits == pytest.approx(LOG6, abs=1e-12)
    v3 = gap_delta(3, RUNNING)
    assert v3.formula_terms["lcm"] == 14 and v3.formula_terms["log2(6)"] == 8
    assert v3.delta_bits == pytest.approx(8 * LOG6, abs=1e-9)
    assert gap_delta(5, RUNNING).delta_bits == v3.delta_bits
    assert gap_delta(2, RUNNING).delta_bits == pytest.approx(2 * LOG6 + math.log2(3) + 4, abs=1e-9)
    assert gap_delta(2, RUNNING).rounded() == "10.754888"


def test_view1_gap_case_split():
    equal = gap_delta(1, DeterministicGains(3, 1, 2, 3))
    assert equal.formula_terms == {"log2(6)": 1, "const": 4}
    v1 = gap_delta(1, RUNNING)
    # delta = 5: 2*ceil(2/5)+1 = 3, ceil(2/5) + ceil(0/5) = 1
    assert v1.formula_terms["max_term"] == 3
    assert v1.delta_bits == pytest.approx(math.log2(9) + 10, abs=1e-9)


def test_gap_relabels_users():
    assert gap_delta(1, RUNNING).formula_terms == gap_delta(1, RUNNING.swapped()).formula_terms
    assert gap_delta(3, DeterministicGains(2, 1, 1, 7)).delta_bits == pytest.approx(8 * LOG6)


def test_undefined_gaps():
    with pytest.raises(UndefinedGap):
        gap_delta(3, DeterministicGains(4, 1, 1, 0))
    with pytest.raises(UndefinedGap):
        gap_delta(0, RUNNING)


def test_rounding_half_even():
    assert GapReport(None, 0.0000125, {}).rounded() == "0.000012"
    assert GapReport(None, 0.0000135, {}).rounded() == "0.000014"


@given(st.sampled_from([1, 2, 3, 4, 5, 6, 7]), st.builds(DeterministicGains, *(st.integers(1, 6),) * 4))
def test_gap_at_least_log6(k, G):
    assert gap_delta(k, G).delta_bits >= LOG6 - 1e-9


def test_gdof_alpha():
    alpha = GdofAlpha("2/7", "2/7", "3/7")
    assert alpha.realization() == RUNNING
    assert alpha.realization(2) == RUNNING.scaled(2)
    with pytest.raises(ValueError):
        GdofAlpha(0, 1, 1)


def test_gdof_regions():
    assert regions_equal(gdof_region(0, GdofAlpha(1, 1, 1)), tdm_region(1, 1))
    region = gdof_region(2, GdofAlpha(Fraction(2, 7), Fraction(2, 7), Fraction(3, 7)))
    assert region.contains_point((Fraction(2, 7), 1))


@given(st.sampled_from([0, 2, 3, 7]),
       st.tuples(*(st.fractions(Fraction(1, 3), 2, max_denominator=3),) * 3))
def test_gdof_invariant_under_multiples(k, ratios):
    alpha = GdofAlpha(*ratios)
    assert regions_equal(gdof_region(k, alpha), gdof_region(k, alpha, multiple=2))
