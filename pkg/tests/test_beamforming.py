import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from numpy.testing import assert_allclose

from arraytrack import (
    ArrayConfig,
    ConfigError,
    DirectionAngles,
    ElementModel,
    IncompleteCutError,
    NumericalError,
    PatternCut,
    array_response,
    directivity,
    element_amplitude,
    pattern_cut,
    pattern_metrics,
    radiated_power,
    save_pattern_cut,
    steering_vector,
    steering_weights,
)


class TestElementModel:
    def test_isotropic_uniform_in_front(self):
        m = ElementModel(kind="isotropic")
        assert element_amplitude(m, DirectionAngles(0.0, 0.0)) == 1.0
        assert element_amplitude(m, DirectionAngles(60.0, 30.0)) == 1.0

    def test_back_half_space_is_dark(self):
        for kind in ("isotropic", "cosine_power"):
            m = ElementModel(kind=kind)
            assert element_amplitude(m, DirectionAngles(120.0, 0.0)) == 0.0

    def test_cosine_power_values(self):
        # amplitude is the boresight direction cosine raised to the exponent
        m1 = ElementModel(kind="cosine_power", exponent=1.0)
        assert_allclose(element_amplitude(m1, DirectionAngles(60.0, 0.0)), 0.5, rtol=1e-15)
        m2 = ElementModel(kind="cosine_power", exponent=2.0)
        assert_allclose(element_amplitude(m2, DirectionAngles(60.0, 0.0)), 0.25, rtol=1e-15)
        assert element_amplitude(m2, DirectionAngles(0.0, 0.0)) == 1.0

    def test_rejects_unknown_kind_and_negative_exponent(self):
        with pytest.raises(ConfigError):
            ElementModel(kind="dipole")
        with pytest.raises(ConfigError):
            ElementModel(kind="cosine_power", exponent=-1.0)


class TestSteering:
    def test_boresight_vector_is_all_ones(self, ura44):
        a = steering_vector(ura44, DirectionAngles(0.0, 0.0))
        assert_allclose(a, np.ones(16), atol=1e-15)

    @given(az=st.floats(-89.0, 89.0), el=st.floats(-89.0, 89.0))
    @settings(max_examples=50)
    def test_unit_magnitude_entries(self, az, el):
        cfg = ArrayConfig(carrier_frequency=2.4e9, num_x=4, num_y=4,
                          spacing_x=0.05, spacing_y=0.05)
        a = steering_vector(cfg, DirectionAngles(az, el))
        assert_allclose(np.abs(a), 1.0, atol=1e-12)

    def test_weights_are_conjugate(self, ura44):
        target = DirectionAngles(17.0, -9.0)
        assert_allclose(steering_weights(ura44, target),
                        np.conj(steering_vector(ura44, target)), atol=1e-15)

    def test_weights_reject_back_half_space(self, ura44):
        with pytest.raises(ConfigError):
            steering_weights(ura44, DirectionAngles(135.0, 0.0))

    @pytest.mark.parametrize("az,el", [(0.0, 0.0), (11.0, 0.0), (-30.0, 23.0), (42.0, 42.0)])
    def test_matched_response_equals_element_count(self, ura44, isotropic_element, az, el):
        steer = DirectionAngles(az, el)
        w = steering_weights(ura44, steer)
        resp = array_response(ura44, w, isotropic_element, steer)
        assert abs(abs(resp) - 16.0) < 1e-9

    def test_response_rejects_wrong_weight_length(self, ura44, isotropic_element):
        with pytest.raises(ValueError):
            array_response(ura44, np.ones(5), isotropic_element, DirectionAngles(0.0, 0.0))

    def test_four_element_line_null(self, isotropic_element):
        # uniform 4-element line: first array-factor null at asin(lambda/(4 d))
        cfg = ArrayConfig(carrier_frequency=2.4e9, num_x=4, num_y=1,
                          spacing_x=0.05, spacing_y=0.05)
        null_az = math.degrees(math.asin(cfg.wavelength() / (4 * 0.05)))
        w = steering_weights(cfg, DirectionAngles(0.0, 0.0))
        resp = array_response(cfg, w, isotropic_element, DirectionAngles(null_az, 0.0))
        assert abs(resp) < 1e-9 * 4


class TestDirectivity:
    def test_single_isotropic_element_front_hemisphere(self):
        # radiates uniformly into half of space: directivity exactly 2
        cfg = ArrayConfig(carrier_frequency=2.4e9, num_x=1, num_y=1,
                          spacing_x=0.05, spacing_y=0.05)
        d = directivity(cfg, np.ones(1), ElementModel(kind="isotropic"),
                        DirectionAngles(0.0, 0.0))
        assert_allclose(d, 10 * math.log10(2.0), atol=1e-3)

    def test_single_cosine_element(self):
        # integral of w^2 over the hemisphere is 2 pi / 3, so D = 6
        cfg = ArrayConfig(carrier_frequency=2.4e9, num_x=1, num_y=1,
                          spacing_x=0.05, spacing_y=0.05)
        d = directivity(cfg, np.ones(1), ElementModel(kind="cosine_power", exponent=1.0),
                        DirectionAngles(0.0, 0.0))
        assert_allclose(d, 10 * math.log10(6.0), atol=1e-3)

    def test_hemisphere_power_identity(self):
        cfg = ArrayConfig(carrier_frequency=2.4e9, num_x=1, num_y=1,
                          spacing_x=0.05, spacing_y=0.05)
        total = radiated_power(cfg, np.ones(1), ElementModel(kind="isotropic"))
        assert_allclose(total, 2 * math.pi, rtol=1e-3)

    def test_invariant_under_weight_scaling(self, ura44, cosine_element):
        steer = DirectionAngles(22.0, 0.0)
        w = steering_weights(ura44, steer)
        d1 = directivity(ura44, w, cosine_element, steer)
        d2 = directivity(ura44, (0.3 - 2.7j) * w, cosine_element, steer)
        assert abs(d1 - d2) < 1e-9

    def test_broadside_gain_level(self, ura44, cosine_element):
        # frozen from an independent brute-force quadrature of this geometry
        w = steering_weights(ura44, DirectionAngles(0.0, 0.0))
        d = directivity(ura44, w, cosine_element, DirectionAngles(0.0, 0.0))
        assert_allclose(d, 15.7622046, atol=1e-4)

    def test_zero_weights_rejected(self, ura44, cosine_element):
        with pytest.raises(NumericalError):
            directivity(ura44, np.zeros(16, complex), cosine_element,
                        DirectionAngles(0.0, 0.0))


class TestPatternCut:
    def test_grid_is_centered_and_sized(self, ura44, cosine_element):
        w = steering_weights(ura44, DirectionAngles(0.0, 0.0))
        cut = pattern_cut(ura44, w, cosine_element, "azimuth", 0.0, span=180.0, step=0.5)
        assert cut.angles_deg.size == 361
        assert cut.angles_deg[0] == -90.0
        assert cut.angles_deg[-1] == 90.0
        assert cut.gain_dbi.shape == cut.angles_deg.shape

    def test_cut_sample_matches_directivity(self, ura44, cosine_element):
        steer = DirectionAngles(10.0, 0.0)
        w = steering_weights(ura44, steer)
        cut = pattern_cut(ura44, w, cosine_element, "azimuth", 0.0, span=180.0, step=0.5)
        i = int(np.where(cut.angles_deg == 10.0)[0][0])
        assert_allclose(cut.gain_dbi[i], directivity(ura44, w, cosine_element, steer),
                        rtol=1e-12)

    def test_broadside_cut_is_symmetric(self, ura44, cosine_element):
        w = steering_weights(ura44, DirectionAngles(0.0, 0.0))
        cut = pattern_cut(ura44, w, cosine_element, "azimuth", 0.0, span=120.0, step=1.0)
        assert_allclose(cut.gain_dbi, cut.gain_dbi[::-1], atol=1e-9)

    def test_elevation_cut_axis(self, ura44, cosine_element):
        w = steering_weights(ura44, DirectionAngles(0.0, 20.0))
        cut = pattern_cut(ura44, w, cosine_element, "elevation", 0.0, span=180.0, step=1.0)
        peak = cut.angles_deg[np.argmax(cut.gain_dbi)]
        # the wide main lobe times the element taper shifts the sampled peak
        # a few degrees toward broadside; the cut must still track the steer
        assert abs(peak - 20.0) <= 4.0

    def test_rejects_bad_axis_and_step(self, ura44, cosine_element):
        w = steering_weights(ura44, DirectionAngles(0.0, 0.0))
        with pytest.raises(ConfigError):
            pattern_cut(ura44, w, cosine_element, "diagonal", 0.0, 180.0, 0.5)
        with pytest.raises(ValueError):
            pattern_cut(ura44, w, cosine_element, "azimuth", 0.0, 180.0, 0.0)


def triangle_cut(side_slope=1.0):
    """Piecewise-linear pattern: apex at 0 dB, first minima at +-8 deg,
    secondary apexes at -6 dB at +-12 deg. Linear interpolation is exact on
    it, so the metric values are known in closed form."""
    angles = np.arange(-20.0, 20.5, 1.0)
    gain = np.empty_like(angles)
    for i, x in enumerate(np.abs(angles)):
        if x <= 8.0:
            gain[i] = -x * side_slope
        elif x <= 12.0:
            gain[i] = -8.0 * side_slope + (x - 8.0) * 0.5
        else:
            gain[i] = -8.0 * side_slope + 2.0 - (x - 12.0)
    return PatternCut(cut_axis="azimuth", fixed_other_angle=0.0,
                      angles_deg=angles, gain_dbi=gain)


class TestPatternMetrics:
    def test_triangle_lobe_metrics_exact(self):
        m = pattern_metrics(triangle_cut())
        assert m.peak_gain_dbi == 0.0
        assert m.peak_angle_deg == 0.0
        assert_allclose(m.hpbw_deg, 6.0, rtol=1e-12)
        assert_allclose(m.sidelobe_level_db, -6.0, rtol=1e-12)

    def test_no_sidelobe_reports_none(self):
        angles = np.arange(-5.0, 5.5, 1.0)
        cut = PatternCut("azimuth", 0.0, angles, -np.abs(angles))
        m = pattern_metrics(cut)
        assert m.sidelobe_level_db is None
        assert_allclose(m.hpbw_deg, 6.0, rtol=1e-12)

    def test_tie_breaks_to_smaller_angle(self):
        angles = np.arange(-4.0, 4.5, 1.0)
        gain = -np.abs(np.abs(angles) - 1.0) * 4.0  # equal apexes at -1 and +1
        m = pattern_metrics(PatternCut("azimuth", 0.0, angles, gain))
        assert m.peak_angle_deg == -1.0

    def test_cut_without_half_power_crossing(self):
        angles = np.arange(-10.0, 10.5, 1.0)
        cut = PatternCut("azimuth", 0.0, angles, -0.1 * np.abs(angles))
        with pytest.raises(IncompleteCutError):
            pattern_metrics(cut)

    def test_steered_beam_metrics(self, ura44, cosine_element):
        w = steering_weights(ura44, DirectionAngles(11.0, 0.0))
        cut = pattern_cut(ura44, w, cosine_element, "azimuth", 0.0, span=180.0, step=0.5)
        m = pattern_metrics(cut)
        assert abs(m.peak_angle_deg - 11.0) <= 2.0
        assert 20.0 < m.hpbw_deg < 45.0
        assert m.sidelobe_level_db < -10.0


class TestSavePatternCut:
    def test_file_layout(self, tmp_path, ura44, cosine_element):
        w = steering_weights(ura44, DirectionAngles(0.0, 0.0))
        cut = pattern_cut(ura44, w, cosine_element, "azimuth", 0.0, span=10.0, step=5.0)
        path = tmp_path / "cut.csv"
        save_pattern_cut(cut, path)
        lines = path.read_text().splitlines()
        assert lines[0] == "angle_deg,gain_dbi"
        assert len(lines) == 4
        assert lines[1].startswith("-5,")
        angle, gain = lines[2].split(",")
        assert float(angle) == 0.0
        assert_allclose(float(gain), cut.gain_dbi[1], rtol=1e-8)
