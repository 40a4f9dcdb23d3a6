#pragma once

#include <utility>
#include <vector>

namespace esn {

struct KpssResult {
    double statistic = 0.0;
    int lag_truncation = 0;
    double critical_value_5pct = 0.463;
    bool reject_stationarity = false;
};

/// Level-stationarity KPSS test: partial sums of demeaned observations over a
/// Bartlett-kernel long-run variance, lag truncation floor(4*(T/100)^0.25).
/// A constant series has statistic 0. Requires length >= 12.
KpssResult kpss_test(const std::vector<double>& y, double critical_value = 0.463);

/// Bookkeeping needed to undo differencing and scaling.
struct TransformRecord {
    int diff_order = 0;                  // d in {0, 1, 2}
    std::vector<double> initial_values;  // first d original values
    double scale_min = 0.0;
    double scale_max = 0.0;
    bool constant_series = false;
    static constexpr double target_lo = -0.5;
    static constexpr double target_hi = 0.5;
};

/// Differences until the KPSS test stops rejecting, up to max_order.
std::pair<std::vector<double>, TransformRecord> apply_differencing(
    const std::vector<double>& y, double critical_value = 0.463, int max_order = 2);

/// Min-max scaling of the (differenced) training window onto [-0.5, 0.5].
/// A constant window maps to all zeros and sets the constant flag.
std::vector<double> scale_to_unit(const std::vector<double>& y, TransformRecord& record);

/// Differencing followed by scaling; the returned record inverts both.
std::pair<std::vector<double>, TransformRecord> forward_transform(
    const std::vector<double>& y, double critical_value = 0.463, int max_order = 2);

/// Undoes scaling, then integrates diff_order times. `anchor` holds the d
/// original-unit values immediately preceding the block being inverted:
/// the training tail when inverting forecasts, record.initial_values when
/// reconstructing the training series.
std::vector<double> inverse_transform(const std::vector<double>& z,
                                      const TransformRecord& record,
                                      const std::vector<double>& anchor);

}  // namespace esn
