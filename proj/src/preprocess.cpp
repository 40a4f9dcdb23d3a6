#include "esn/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "esn/errors.hpp"

namespace esn {

KpssResult kpss_test(const std::vector<double>& y, double critical_value) {
    const std::size_t t = y.size();
    if (t < 12) {
        throw DataError("kpss_test: series of length " + std::to_string(t) +
                        " is too short (need >= 12)");
    }

    KpssResult result;
    result.critical_value_5pct = critical_value;
    result.lag_truncation = static_cast<int>(
        std::floor(4.0 * std::pow(static_cast<double>(t) / 100.0, 0.25)));

    double mean = 0.0;
    for (const double v : y) mean += v;
    mean /= static_cast<double>(t);

    std::vector<double> resid(t);
    for (std::size_t i = 0; i < t; ++i) resid[i] = y[i] - mean;

    double sum_sq_partial = 0.0;
    double partial = 0.0;
    double sum_sq_resid = 0.0;
    for (std::size_t i = 0; i < t; ++i) {
        partial += resid[i];
        sum_sq_partial += partial * partial;
        sum_sq_resid += resid[i] * resid[i];
    }

    if (sum_sq_resid == 0.0) {  // constant series: defined as stationary
        result.statistic = 0.0;
        result.reject_stationarity = false;
        return result;
    }

    // Bartlett-kernel long-run variance.
    double long_run = sum_sq_resid;
    const int lags = result.lag_truncation;
    for (int s = 1; s <= lags; ++s) {
        double autocov = 0.0;
        for (std::size_t i = static_cast<std::size_t>(s); i < t; ++i) {
            autocov += resid[i] * resid[i - static_cast<std::size_t>(s)];
        }
        const double weight = 1.0 - static_cast<double>(s) / (lags + 1.0);
        long_run += 2.0 * weight * autocov;
    }
    long_run /= static_cast<double>(t);

    const double eta = sum_sq_partial / (static_cast<double>(t) * static_cast<double>(t));
    result.statistic = eta / long_run;
    result.reject_stationarity = result.statistic > critical_value;
    return result;
}

namespace {

std::vector<double> difference_once(const std::vector<double>& y) {
    std::vector<double> d(y.size() - 1);
    for (std::size_t i = 1; i < y.size(); ++i) d[i - 1] = y[i] - y[i - 1];
    return d;
}

}  // namespace

std::pair<std::vector<double>, TransformRecord> apply_differencing(
    const std::vector<double>& y, double critical_value, int max_order) {
    TransformRecord record;
    std::vector<double> current = y;
    while (record.diff_order < max_order &&
           kpss_test(current, critical_value).reject_stationarity) {
        record.initial_values.push_back(y[static_cast<std::size_t>(record.diff_order)]);
        current = difference_once(current);
        ++record.diff_order;
    }
    return {std::move(current), record};
}

std::vector<double> scale_to_unit(const std::vector<double>& y, TransformRecord& record) {
    const auto [lo_it, hi_it] = std::minmax_element(y.begin(), y.end());
    record.scale_min = *lo_it;
    record.scale_max = *hi_it;
    if (record.scale_min == record.scale_max) {
        record.constant_series = true;
        return std::vector<double>(y.size(), 0.0);
    }
    const double span = record.scale_max - record.scale_min;
    std::vector<double> z(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        z[i] = (y[i] - record.scale_min) / span - 0.5;
    }
    return z;
}

std::pair<std::vector<double>, TransformRecord> forward_transform(
    const std::vector<double>& y, double critical_value, int max_order) {
    auto [differenced, record] = apply_differencing(y, critical_value, max_order);
    auto scaled = scale_to_unit(differenced, record);
    return {std::move(scaled), record};
}

std::vector<double> inverse_transform(const std::vector<double>& z,
                                      const TransformRecord& record,
                                      const std::vector<double>& anchor) {
    if (anchor.size() != static_cast<std::size_t>(record.diff_order)) {
        throw DataError("inverse_transform: anchor has " + std::to_string(anchor.size()) +
                        " values but the record has diff order " +
                        std::to_string(record.diff_order));
    }

    const double span = record.scale_max - record.scale_min;
    std::vector<double> values(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) {
        values[i] = (z[i] + 0.5) * span + record.scale_min;
    }

    // Integrate one order at a time. At order k the running anchor is the
    // (d-k)-th difference of the original series evaluated at the boundary.
    for (int k = record.diff_order; k >= 1; --k) {
        double level;
        if (k == 1) {
            level = anchor.back();
        } else {
            // Last value of the (k-1)-th difference just before the block.
            level = 0.0;
            const int order = k - 1;
            std::vector<double> tail = anchor;
            for (int o = 0; o < order; ++o) tail = difference_once(tail);
            level = tail.back();
        }
        for (auto& v : values) {
            level += v;
            v = level;
        }
    }
    return values;
}

}  // namespace esn
