#pragma once

#include <string>
#include <vector>

namespace esn {

enum class BenchmarkKind { Naive, Drift, SeasonalNaive, Mean, Theta };

const char* benchmark_name(BenchmarkKind kind);
BenchmarkKind benchmark_from_name(const std::string& name);

inline const BenchmarkKind kAllBenchmarks[] = {
    BenchmarkKind::Naive, BenchmarkKind::Drift, BenchmarkKind::SeasonalNaive,
    BenchmarkKind::Mean, BenchmarkKind::Theta};

/// Point forecasts over the horizon for the requested simple method.
///   Naive:          y_T repeated
///   Drift:          y_T + k (y_T - y_1) / (T - 1)
///   SeasonalNaive:  last observed value from the same season
///   Mean:           arithmetic mean of the training window
///   Theta:          SES with drift on the (seasonally adjusted) series,
///                   re-seasonalized when the seasonality test fires
std::vector<double> benchmark_forecast(BenchmarkKind kind, const std::vector<double>& train,
                                       int period, int horizon);

}  // namespace esn
