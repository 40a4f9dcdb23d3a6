#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "esn/preprocess.hpp"
#include "esn/readout.hpp"
#include "esn/reservoir.hpp"
#include "esn/time_series.hpp"

namespace esn {

/// The four swept hyperparameters plus the fixed structural constants.
struct EsnConfig {
    double alpha = 1.0;  // leakage rate, (0, 1]
    double rho = 0.9;    // target spectral radius, > 0
    double tau = 0.4;    // reservoir scaling, (0, 1]
    IcKind ic_kind = IcKind::Aicc;

    double density = 0.5;
    double washout_frac = 0.05;
    double lambda_lo = 1e-4;
    double lambda_hi = 2.0;
    int k_multiplier = 2;    // K = k_multiplier * N lambda candidates
    int reservoir_cap = 200;
    double kpss_critical_value = 0.463;  // 5% level-stationarity
    int max_diff_order = 2;
    std::uint64_t seed = 0;

    void validate() const;  // throws DataError on out-of-range values

    /// Lossless key=value round trip, used by model files and tests.
    std::string to_kv() const;
    static EsnConfig from_kv(const std::string& text);
};

struct TrainedEsn {
    ReservoirWeights weights;
    RidgeFit readout;
    TransformRecord transform;
    std::vector<double> x_final;
    double last_scaled_value = 0.0;
    std::vector<double> train_tail;  // last diff_order original values
    EsnConfig config;
};

struct ForecastResult {
    std::string series_id;
    std::vector<double> point_forecasts;  // original units, length h
    double elapsed_seconds = 0.0;
    EsnConfig config;
};

/// Full training pipeline: KPSS-guided differencing, scaling to [-0.5, 0.5],
/// one-step-ahead teacher forcing through the reservoir, ridge readout with
/// the information-criterion lambda search. Throws ConstantSeriesSignal when
/// the transformed series has zero variance.
TrainedEsn fit(const std::vector<double>& train, const Frequency& frequency,
               const EsnConfig& config);

/// Recursive forecast: each scaled prediction is fed back as the next input;
/// the inverse transform maps the path to original units at the end.
ForecastResult forecast(const TrainedEsn& model, int horizon);

/// fit + forecast over the frequency horizon, wall-clock timed. A constant
/// series falls back to repeating its last observed value.
ForecastResult fit_forecast(const SplitSeries& series, const Frequency& frequency,
                            const EsnConfig& config);

/// Versioned text format: key-value header plus matrix blocks; values are
/// written with shortest round-trip formatting, so reloading is exact.
void save_model(const TrainedEsn& model, const std::string& path);
TrainedEsn load_model(const std::string& path);

}  // namespace esn
