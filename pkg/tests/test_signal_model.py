import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from numpy.testing import assert_allclose, assert_array_equal

from arraytrack import (
    ConfigError,
    DirectionAngles,
    FileFormatError,
    NoiseSpec,
    SourceSpec,
    generate_snapshots,
    load_snapshots,
    save_snapshots,
    steering_vector,
)

NOISELESS = NoiseSpec(snr_db=math.inf, seed=0)


def one_source(az=10.0, el=20.0, power=1.0):
    return [SourceSpec(angles=DirectionAngles(az, el), power=power)]


class TestSpecs:
    def test_power_must_be_positive(self):
        with pytest.raises(ConfigError):
            SourceSpec(angles=DirectionAngles(0.0, 0.0), power=0.0)

    def test_source_must_be_visible(self):
        with pytest.raises(ConfigError):
            SourceSpec(angles=DirectionAngles(135.0, 0.0), power=1.0)

    def test_nan_snr_rejected(self):
        with pytest.raises(ConfigError):
            NoiseSpec(snr_db=math.nan)


class TestGenerateSnapshots:
    def test_requires_sources_and_samples(self, ura44):
        with pytest.raises(ConfigError):
            generate_snapshots(ura44, [], NOISELESS, 4)
        with pytest.raises(ConfigError):
            generate_snapshots(ura44, one_source(), NOISELESS, 0)

    def test_noiseless_single_source_is_scaled_steering_vector(self, ura44):
        m = generate_snapshots(ura44, one_source(power=4.0), NOISELESS, 1)
        assert m.shape == (16, 1)
        a = steering_vector(ura44, DirectionAngles(10.0, 20.0))
        ratio = m[:, 0] / a
        assert_allclose(ratio, ratio[0], rtol=1e-12)  # one common symbol factor

    def test_noiseless_rank_equals_source_count(self, ura44):
        sources = [SourceSpec(angles=DirectionAngles(-20.0, 5.0)),
                   SourceSpec(angles=DirectionAngles(35.0, -10.0))]
        m = generate_snapshots(ura44, sources, NOISELESS, 16)
        s = np.linalg.svd(m, compute_uv=False)
        assert np.sum(s > 1e-9 * s[0]) == 2

    def test_deterministic_per_seed(self, ura44):
        spec = NoiseSpec(snr_db=10.0, seed=123)
        m1 = generate_snapshots(ura44, one_source(), spec, 50)
        m2 = generate_snapshots(ura44, one_source(), spec, 50)
        assert_array_equal(m1, m2)
        m3 = generate_snapshots(ura44, one_source(), NoiseSpec(snr_db=10.0, seed=124), 50)
        assert not np.array_equal(m1, m3)

    def test_mean_power_matches_model(self, ura44):
        # per element: signal power 1 plus noise power 10^(-20/10)
        m = generate_snapshots(ura44, one_source(power=1.0),
                               NoiseSpec(snr_db=20.0, seed=5), 10_000)
        mean_power = np.mean(np.abs(m) ** 2)
        assert_allclose(mean_power, 1.01, rtol=0.05)

    def test_power_scaling_scales_covariance(self, ura44):
        m1 = generate_snapshots(ura44, one_source(power=1.0), NOISELESS, 64)
        m4 = generate_snapshots(ura44, one_source(power=4.0), NOISELESS, 64)
        r1 = m1 @ m1.conj().T / 64
        r4 = m4 @ m4.conj().T / 64
        assert_allclose(r4, 4.0 * r1, rtol=1e-12)

    def test_element_gains_shape_checked(self, ura44):
        with pytest.raises(ConfigError):
            generate_snapshots(ura44, one_source(), NOISELESS, 4,
                               element_gains=np.ones(5))

    def test_element_gains_scale_signal_only(self, ura44):
        gains = np.linspace(0.5, 1.5, 16) * np.exp(1j * np.linspace(0, 0.3, 16))
        base = generate_snapshots(ura44, one_source(), NOISELESS, 8)
        skew = generate_snapshots(ura44, one_source(), NOISELESS, 8, element_gains=gains)
        assert_allclose(skew, gains[:, None] * base, rtol=1e-12)


class TestSnapshotFiles:
    def test_minimal_file_layout(self, tmp_path):
        path = tmp_path / "one.csv"
        save_snapshots(np.array([[1.0 + 2.0j]]), path)
        assert path.read_text() == "1,1\n1.0,2.0\n"

    def test_round_trip_bit_exact(self, tmp_path, ura44):
        m = generate_snapshots(ura44, one_source(), NoiseSpec(snr_db=3.0, seed=9), 100)
        path = tmp_path / "m.csv"
        save_snapshots(m, path)
        assert_array_equal(load_snapshots(path), m)

    @given(re=st.floats(allow_nan=False, allow_infinity=False, width=64),
           im=st.floats(allow_nan=False, allow_infinity=False, width=64))
    @settings(max_examples=60)
    def test_round_trip_any_finite_value(self, tmp_path_factory, re, im):
        path = tmp_path_factory.mktemp("snap") / "v.csv"
        m = np.array([[complex(re, im)]])
        save_snapshots(m, path)
        assert_array_equal(load_snapshots(path), m)

    def test_column_major_line_order(self, tmp_path):
        m = np.array([[1.0 + 0j, 3.0 + 0j],
                      [2.0 + 0j, 4.0 + 0j]])
        path = tmp_path / "order.csv"
        save_snapshots(m, path)
        lines = path.read_text().splitlines()
        assert lines[0] == "2,2"
        # snapshot 0 runs over both elements before snapshot 1 starts
        assert [ln.split(",")[0] for ln in lines[1:]] == ["1.0", "2.0", "3.0", "4.0"]

    def test_empty_file_rejected(self, tmp_path):
        path = tmp_path / "empty.csv"
        path.write_text("")
        with pytest.raises(FileFormatError, match="line 1"):
            load_snapshots(path)

    def test_bad_header_rejected(self, tmp_path):
        path = tmp_path / "h.csv"
        path.write_text("16\n")
        with pytest.raises(FileFormatError, match="line 1"):
            load_snapshots(path)

    def test_wrong_line_count_rejected(self, tmp_path):
        path = tmp_path / "short.csv"
        path.write_text("2,2\n1.0,0.0\n2.0,0.0\n")
        with pytest.raises(FileFormatError, match="expected 4 data lines"):
            load_snapshots(path)

    def test_non_numeric_value_names_line(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("1,2\n1.0,0.0\nfoo,0.0\n")
        with pytest.raises(FileFormatError, match="line 3"):
            load_snapshots(path)

    def test_wrong_column_count_names_line(self, tmp_path):
        path = tmp_path / "cols.csv"
        path.write_text("1,2\n1.0,0.0\n1.0,0.0,9.0\n")
        with pytest.raises(FileFormatError, match="line 3"):
            load_snapshots(path)
