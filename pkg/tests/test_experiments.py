"""Experiment orchestration: limit cycle, drive series, sweeps, calibration."""

import math

import numpy as np
import pytest

from spinsync import (
    CalibrationResult,
    DriveConfig,
    HusimiGrid,
    SpinSystemConfig,
    SweepResult,
    SweepSpec,
    build_liouvillian,
    calibrate_drive,
    check_density_matrix,
    husimi_grid,
    run_amplitude_sweep,
    run_arnold_tongue,
    run_drive_series,
    run_limit_cycle,
    run_sweep,
    steady_state,
    thermal_state,
    visibility,
)
from spinsync.experiments import (
    DEFAULT_SERIES_DURATIONS,
    default_amplitude_grid,
    default_arnold_grid,
)
from spinsync.phasespace import HUSIMI_PREFACTOR

from conftest import SEED


@pytest.fixture(scope="module")
def limit_cycle(config):
    return run_limit_cycle(config)


class TestLimitCycle:
    def test_no_phase_preference(self, limit_cycle):
        """Without a drive the phase distribution must be featureless."""
        assert limit_cycle.visibility < 1e-8
        assert limit_cycle.max_sync <= 1e-12

    def test_state_is_diagonal(self, limit_cycle):
        off = limit_cycle.state - np.diag(np.diag(limit_cycle.state))
        assert np.max(np.abs(off)) < 1e-10
        check_density_matrix(limit_cycle.state)

    def test_grid_shape_and_phase_flatness(self, limit_cycle):
        assert isinstance(limit_cycle.grid, HusimiGrid)
        assert limit_cycle.grid.values.shape == (64, 128)
        # the profile still varies with theta (populations differ), but
        # every phi row must be constant when no coherence is present
        per_row = np.ptp(limit_cycle.grid.values, axis=1)
        assert np.max(per_row) < 1e-12 * np.max(limit_cycle.grid.values)

    def test_maximally_mixed_limit(self):
        """Zero purity factors give the identity state and a constant
        phase profile at one quarter of the Husimi prefactor."""
        config = SpinSystemConfig(epsilon_p=0.0, epsilon_f=0.0)
        result = run_limit_cycle(config, n_theta=16, n_phi=32)
        np.testing.assert_allclose(
            result.grid.values, HUSIMI_PREFACTOR / 4.0, rtol=0.0, atol=1e-12
        )

    def test_resolution_arguments(self, config):
        result = run_limit_cycle(config, n_theta=8, n_phi=16)
        assert result.grid.values.shape == (8, 16)


@pytest.fixture(scope="module")
def series(config):
    # t = 0 in front exercises the thermal shortcut
    return run_drive_series(
        config, 0.1, durations=(0.0, 0.05, 10.0, 100.0), n_theta=32, n_phi=64
    )


@pytest.fixture(scope="module")
def steady_driven(config):
    return steady_state(build_liouvillian(config, DriveConfig(amplitude_hz=0.1)))


class TestDriveSeries:
    def test_zero_duration_is_thermal(self, series, config):
        first = series[0]
        assert first.duration_s == 0.0
        np.testing.assert_array_equal(first.state, thermal_state(config))
        assert first.visibility < 1e-8
        assert first.coherence_abs == 0.0

    def test_coherence_grows_with_duration(self, series):
        coherences = [p.coherence_abs for p in series]
        assert coherences == sorted(coherences)
        by_t = {p.duration_s: p.coherence_abs for p in series}
        assert by_t[10.0] > by_t[0.05]

    def test_visibility_saturates_at_steady_state(self, series, steady_driven):
        vis_long = series[-1].visibility
        vis_steady = visibility(husimi_grid(steady_driven, n_theta=32, n_phi=64))
        assert abs(vis_long - vis_steady) / vis_steady < 1e-3

    def test_coherence_matches_state_entry(self, series):
        for point in series:
            assert point.coherence_abs == abs(point.state[0, 2])

    def test_default_durations(self):
        assert DEFAULT_SERIES_DURATIONS == (0.05, 0.1, 1.0, 10.0, 100.0)

    @pytest.mark.parametrize(
        "durations",
        [(), (-1.0, 2.0), (2.0, 1.0), (0.1, 0.05, 1.0)],
    )
    def test_bad_durations_rejected(self, config, durations):
        with pytest.raises(ValueError):
            run_drive_series(config, 0.1, durations=durations)


# endpoints of the documented range plus the known peak region
AMP_OMEGAS = (1e-3, 0.126, 1e3)


@pytest.fixture(scope="module")
def amp_sweep(config):
    return run_amplitude_sweep(config, omegas_hz=AMP_OMEGAS, n_theta=32, n_phi=64)


class TestAmplitudeSweep:
    def test_endpoints_are_flat(self, amp_sweep):
        """Visibility dies off in both the weak and saturated regimes."""
        assert amp_sweep.values[0] < 0.05
        assert amp_sweep.values[-1] < 0.05
        assert amp_sweep.values[1] > amp_sweep.values[0]
        assert amp_sweep.values[1] > amp_sweep.values[-1]

    def test_result_structure(self, amp_sweep):
        assert amp_sweep.observable == "visibility"
        np.testing.assert_array_equal(amp_sweep.axes["omega_hz"], AMP_OMEGAS)
        assert amp_sweep.values.shape == (3,)
        assert amp_sweep.metadata["peak_omega_hz"] == 0.126
        assert amp_sweep.metadata["peak_value"] == amp_sweep.values[1]
        assert amp_sweep.metadata["n_theta"] == 32

    def test_workers_do_not_change_values(self, config, amp_sweep):
        parallel = run_amplitude_sweep(
            config, omegas_hz=AMP_OMEGAS, n_theta=32, n_phi=64, workers=4
        )
        np.testing.assert_array_equal(parallel.values, amp_sweep.values)

    def test_default_grid(self):
        grid = default_amplitude_grid()
        assert grid.shape == (61,)
        assert grid[0] == pytest.approx(1e-3, rel=1e-12)
        assert grid[-1] == pytest.approx(1e3, rel=1e-12)
        steps = np.diff(np.log10(grid))
        np.testing.assert_allclose(steps, steps[0], rtol=1e-9)

    @pytest.mark.parametrize("omegas", [[], [0.2, 0.1], [[0.1, 0.2]]])
    def test_bad_axis_rejected(self, config, omegas):
        with pytest.raises(ValueError):
            run_amplitude_sweep(config, omegas_hz=omegas)


ARNOLD_OMEGAS = (0.0, 0.05, 0.1)
ARNOLD_DETUNINGS = (-3.0, -1.0, 0.0, 1.0, 3.0)


@pytest.fixture(scope="module")
def tongue(config):
    return run_arnold_tongue(
        config, omegas_hz=ARNOLD_OMEGAS, detunings_hz=ARNOLD_DETUNINGS
    )


class TestArnoldTongue:
    def test_undriven_row_is_zero(self, tongue):
        # no drive, no coherence, so the whole row vanishes
        assert np.max(np.abs(tongue.values[0])) <= 1e-12

    def test_resonance_dominates_each_row(self, tongue):
        center = list(ARNOLD_DETUNINGS).index(0.0)
        for row in tongue.values[1:]:
            assert row[center] >= row[0]
            assert row[center] >= row[-1]

    def test_symmetric_in_detuning(self, tongue):
        flipped = tongue.values[:, ::-1]
        scale = np.max(tongue.values)
        assert np.max(np.abs(tongue.values - flipped)) <= 1e-8 * scale

    def test_result_structure(self, tongue):
        assert tongue.observable == "max-sync"
        assert tongue.values.shape == (3, 5)
        assert tongue.metadata["duration_s"] == 100.0
        assert tongue.metadata["steady_state"] is False

    def test_steady_state_flag_agrees_at_long_duration(self, config):
        """100 s is many relaxation times, so the finite-time map and the
        steady-state solve land on the same tongue."""
        kwargs = dict(omegas_hz=[0.1], detunings_hz=[-1.0, 0.0, 1.0])
        finite = run_arnold_tongue(config, duration_s=100.0, **kwargs)
        steady = run_arnold_tongue(config, use_steady_state=True, **kwargs)
        np.testing.assert_allclose(steady.values, finite.values, rtol=1e-6)
        assert steady.metadata["steady_state"] is True

    def test_workers_do_not_change_values(self, config, tongue):
        parallel = run_arnold_tongue(
            config,
            omegas_hz=ARNOLD_OMEGAS,
            detunings_hz=ARNOLD_DETUNINGS,
            workers=4,
        )
        np.testing.assert_array_equal(parallel.values, tongue.values)

    def test_asymmetric_detunings_rejected(self, config):
        with pytest.raises(ValueError, match="symmetric"):
            run_arnold_tongue(
                config, omegas_hz=[0.1], detunings_hz=[-1.0, 0.0, 2.0]
            )

    def test_nonpositive_duration_rejected(self, config):
        with pytest.raises(ValueError, match="duration"):
            run_arnold_tongue(
                config,
                omegas_hz=[0.1],
                detunings_hz=[-1.0, 0.0, 1.0],
                duration_s=0.0,
            )

    def test_default_grid(self):
        omegas, detunings = default_arnold_grid()
        assert omegas.shape == (21,)
        assert detunings.shape == (41,)
        assert omegas[0] == pytest.approx(1e-2, rel=1e-12)
        assert omegas[-1] == pytest.approx(1.0, rel=1e-12)
        np.testing.assert_allclose(detunings + detunings[::-1], 0.0, atol=1e-12)


class TestSweepResultValidation:
    def test_shape_mismatch_rejected(self):
        with pytest.raises(ValueError, match="shape"):
            SweepResult(
                axes={"omega_hz": np.array([0.1, 0.2])},
                values=np.zeros(3),
                observable="visibility",
            )

    def test_two_axis_shape_checked(self):
        with pytest.raises(ValueError, match="shape"):
            SweepResult(
                axes={
                    "omega_hz": np.array([0.1, 0.2]),
                    "detuning_hz": np.array([-1.0, 0.0, 1.0]),
                },
                values=np.zeros((3, 2)),
                observable="max-sync",
            )

    def test_non_finite_values_rejected(self):
        with pytest.raises(ValueError, match="finite"):
            SweepResult(
                axes={"omega_hz": np.array([0.1, 0.2])},
                values=np.array([0.0, np.nan]),
                observable="visibility",
            )


class TestSweepSpecDispatch:
    def test_observable_property(self):
        amp = SweepSpec(omegas_hz=np.array([0.1, 0.2]))
        assert amp.observable == "visibility"
        arnold = SweepSpec(
            omegas_hz=np.array([0.1, 0.2]),
            detunings_hz=np.array([-1.0, 0.0, 1.0]),
        )
        assert arnold.observable == "max-sync"

    def test_axes_validated_at_construction(self):
        with pytest.raises(ValueError):
            SweepSpec(omegas_hz=np.array([]))
        with pytest.raises(ValueError):
            SweepSpec(
                omegas_hz=np.array([0.1]), detunings_hz=np.array([1.0, -1.0])
            )

    def test_dispatch_matches_direct_amplitude_call(self, config):
        spec = SweepSpec(
            omegas_hz=np.array([1e-3, 0.1]), n_theta=16, n_phi=32
        )
        via_spec = run_sweep(config, spec)
        direct = run_amplitude_sweep(
            config, omegas_hz=[1e-3, 0.1], n_theta=16, n_phi=32
        )
        assert via_spec.observable == direct.observable
        np.testing.assert_array_equal(via_spec.values, direct.values)

    def test_dispatch_matches_direct_arnold_call(self, config):
        spec = SweepSpec(
            omegas_hz=np.array([0.1]),
            detunings_hz=np.array([-1.0, 0.0, 1.0]),
            duration_s=10.0,
        )
        via_spec = run_sweep(config, spec)
        direct = run_arnold_tongue(
            config,
            omegas_hz=[0.1],
            detunings_hz=[-1.0, 0.0, 1.0],
            duration_s=10.0,
        )
        np.testing.assert_array_equal(via_spec.values, direct.values)

    def test_repeat_runs_are_bit_identical(self, config):
        """Identical spec and config must reproduce every bit."""
        spec = SweepSpec(
            omegas_hz=np.array([0.05, 0.1]),
            detunings_hz=np.array([-2.0, 0.0, 2.0]),
            duration_s=50.0,
        )
        first = run_sweep(config, spec)
        second = run_sweep(config, spec)
        np.testing.assert_array_equal(first.values, second.values)


class TestCalibrateDrive:
    TRUE_OMEGA = 0.1

    @staticmethod
    def signal(times):
        return np.sin(2.0 * math.pi * TestCalibrateDrive.TRUE_OMEGA * times)

    def test_noiseless_recovery_within_one_percent(self):
        times = np.linspace(0.02, 0.4, 20)
        result = calibrate_drive(times, self.signal(times))
        assert abs(result.amplitude_hz - self.TRUE_OMEGA) / self.TRUE_OMEGA < 0.01
        assert result.small_angle is True
        assert result.n_samples == 20
        assert 0.0 <= result.residual_rms < 5e-3

    def test_long_grid_bias_is_flagged(self):
        """Sampling out to 0.5 s pushes the largest fitted angle past the
        small-angle cutoff; the sine truncation then biases the slope low
        by slightly more than one percent, and the flag records it."""
        times = np.arange(1, 11) * 0.05
        result = calibrate_drive(times, self.signal(times))
        bias = abs(result.amplitude_hz - self.TRUE_OMEGA) / self.TRUE_OMEGA
        assert 0.009 < bias < 0.012
        assert result.small_angle is False

    def test_zero_signal_gives_zero_amplitude(self):
        times = np.linspace(0.02, 0.4, 10)
        result = calibrate_drive(times, np.zeros_like(times))
        assert result.amplitude_hz == 0.0
        assert result.slope_rad_per_s == 0.0
        assert result.residual_rms == 0.0
        assert result.small_angle is True

    def test_noisy_recovery_within_three_percent(self):
        rng = np.random.default_rng(SEED)
        times = np.linspace(0.02, 0.4, 20)
        noisy = self.signal(times) + 0.01 * rng.standard_normal(times.size)
        result = calibrate_drive(times, noisy)
        assert abs(result.amplitude_hz - self.TRUE_OMEGA) / self.TRUE_OMEGA < 0.03

    def test_signal_scaling_is_linear(self):
        times = np.linspace(0.02, 0.3, 8)
        base = calibrate_drive(times, self.signal(times))
        doubled = calibrate_drive(times, 2.0 * self.signal(times))
        assert doubled.amplitude_hz == pytest.approx(
            2.0 * base.amplitude_hz, rel=1e-15
        )

    @pytest.mark.parametrize(
        "times, signals",
        [
            ([0.1, 0.2], [0.0, 0.1]),  # too few samples
            ([0.3, 0.2, 0.1], [0.1, 0.1, 0.1]),  # descending
            ([0.0, 0.1, 0.2], [0.0, 0.1, 0.1]),  # t must start positive
            ([0.1, 0.1, 0.2], [0.0, 0.1, 0.1]),  # repeated time
            ([0.1, 0.2, 0.3], [0.0, 0.1]),  # length mismatch
        ],
    )
    def test_bad_samples_rejected(self, times, signals):
        with pytest.raises(ValueError):
            calibrate_drive(times, signals)

    def test_result_type(self):
        times = np.linspace(0.05, 0.3, 6)
        result = calibrate_drive(times, self.signal(times))
        assert isinstance(result, CalibrationResult)
