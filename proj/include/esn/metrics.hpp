#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace esn {

/// Symmetric mean absolute percentage error, in percent, bounded by [0, 200].
/// Terms with |y| + |ŷ| == 0 contribute nothing.
double smape(const std::vector<double>& actual, const std::vector<double>& forecast);

/// Mean absolute scaled error with a seasonal in-sample denominator. Throws
/// DataError when the training series is seasonally constant.
double mase(const std::vector<double>& actual, const std::vector<double>& forecast,
            const std::vector<double>& train, int period);

struct Decomposition {
    std::vector<double> trend;
    std::vector<double> seasonal;
    std::vector<double> remainder;
};

/// Classical additive decomposition: centered 2xm moving-average trend with
/// endpoint extension by local linear fit, per-season means re-centered to
/// sum to zero, remainder as residual. Requires T >= 2m + 1.
Decomposition decompose_additive(const std::vector<double>& y, int period);

struct Strength {
    double value = 0.0;
    bool degenerate = false;  // set when the reference variance is zero
};

/// F_T = max(0, 1 - Var(R) / Var(T + R)), population variance.
Strength strength_of_trend(const Decomposition& components);

/// F_S = max(0, 1 - Var(R) / Var(S + R)).
Strength strength_of_seasonality(const Decomposition& components);

struct AccuracyRecord {
    std::string series_id;
    std::string model_id;
    std::optional<double> mase;  // empty when the denominator was degenerate
    double smape_pct = 0.0;
    double elapsed_seconds = 0.0;
};

struct DescriptiveStats {
    std::size_t n = 0;
    double min = 0.0;
    double q1 = 0.0;
    double mean = 0.0;
    double median = 0.0;
    double q3 = 0.0;
    double max = 0.0;
    double std_dev = 0.0;  // sample (n-1); 0 when n == 1
};

/// Quartiles use linear interpolation (type-7); median is the midpoint rule.
DescriptiveStats describe(std::vector<double> values);

struct ModelSummary {
    std::string model_id;
    std::size_t n = 0;
    std::size_t n_degenerate = 0;  // records without a MASE value
    DescriptiveStats mase;
    DescriptiveStats smape;
    double mean_elapsed = 0.0;
    double total_elapsed = 0.0;
};

/// One summary row per model, sorted by mean MASE ascending.
std::vector<ModelSummary> aggregate(const std::vector<AccuracyRecord>& records);

}  // namespace esn
