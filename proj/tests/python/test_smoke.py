"""Smoke tests for the python bindings."""
import math

import pytest

import esnforecast as ef


def synthetic_series(series_id, length, seed):
    # Simple LCG so the fixture needs nothing beyond the stdlib.
    state = seed
    values = []
    for t in range(length):
        state = (6364136223846793005 * state + 1442695040888963407) % 2**64
        noise = (state >> 11) / 2**53 - 0.5
        values.append(100.0 + 0.8 * t + 12.0 * math.sin(2 * math.pi * t / 12) + 4.0 * noise)
    return ef.TimeSeries(series_id, ef.Frequency.monthly(), values)


def test_version():
    assert ef.__version__


def test_metric_oracles():
    assert ef.smape([100.0], [50.0]) == pytest.approx(66.6667, abs=1e-4)
    assert ef.mase([3.0, 4.0], [4.0, 6.0], [1, 2, 3, 4, 2, 3, 4, 5], 4) == 1.5
    with pytest.raises(ValueError):
        ef.mase([1.0], [1.0], [5.0, 6.0, 5.0, 6.0], 2)


def test_grid_is_complete():
    grid = ef.generate_grid()
    assert len(grid) == 1320
    cells = {(p.ic, p.alpha, p.rho, p.tau) for p in grid}
    assert (ef.IcKind.AICc, 1.0, 0.9, 0.4) in cells
    assert (ef.IcKind.AIC, 1.0, 0.4, 0.6) in cells


def test_fit_forecast_shape_and_determinism():
    series = synthetic_series("M1", 96, 7)
    split = ef.split_train_test(series)
    config = ef.EsnConfig()
    config.seed = 42

    a = ef.fit_forecast(split, ef.Frequency.monthly(), config)
    b = ef.fit_forecast(split, ef.Frequency.monthly(), config)
    assert len(a.point_forecasts) == 18
    assert all(math.isfinite(v) for v in a.point_forecasts)
    assert a.point_forecasts == b.point_forecasts

    accuracy = ef.mase(split.test, a.point_forecasts, split.train, 12)
    assert math.isfinite(accuracy)


def test_benchmarks_match_hand_values():
    assert ef.benchmark_forecast(ef.BenchmarkKind.NAIVE, [1, 2, 3], 12, 2) == [3, 3]
    assert ef.benchmark_forecast(ef.BenchmarkKind.DRIFT, [1, 2, 3], 12, 2) == [4, 5]
    assert ef.benchmark_forecast(
        ef.BenchmarkKind.SNAIVE, [1, 2, 3, 4, 5, 6, 7, 8], 4, 6
    ) == [5, 6, 7, 8, 5, 6]
    assert ef.benchmark_forecast(ef.BenchmarkKind.MEAN, [2, 4], 12, 3) == [3, 3, 3]


def test_preprocessing_round_trip():
    series = synthetic_series("M2", 80, 11)
    z, record = ef.forward_transform(series.values)
    assert all(-0.5 <= v <= 0.5 for v in z)
    back = ef.inverse_transform(z, record, record.initial_values)
    original = series.values[record.diff_order:]
    assert back == pytest.approx(original, rel=1e-10)


def test_kpss_flags_a_trend():
    trend = [float(t) for t in range(200)]
    result = ef.kpss_test(trend)
    assert result.reject_stationarity
    noise = synthetic_series("M3", 200, 13).values
    detrended = [v - 0.8 * t for t, v in enumerate(noise)]
    assert not ef.kpss_test(detrended).reject_stationarity


def test_spectral_radius_and_weights():
    assert ef.spectral_radius([[0.0, 1.0], [-1.0, 0.0]]) == pytest.approx(1.0, abs=1e-10)
    weights = ef.generate_weights(30, 0.9, 5)
    assert abs(ef.spectral_radius(weights.w) - 0.9) <= 1e-8


def test_run_sweep_in_memory(tmp_path):
    dataset = [ef.split_train_test(synthetic_series(f"M{i}", 60, 20 + i)) for i in range(2)]
    grid = ef.generate_grid()[:6]
    records = ef.run_sweep(dataset, grid, master_seed=1, parallelism=1)
    assert len(records) == 12
    assert all(r.status == ef.SweepStatus.OK for r in records)
    rerun = ef.run_sweep(dataset, grid, master_seed=1, parallelism=1)
    assert [r.mase for r in records] == [r.mase for r in rerun]
