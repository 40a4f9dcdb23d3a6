#include "esn/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

#include "esn/errors.hpp"

namespace esn {

double smape(const std::vector<double>& actual, const std::vector<double>& forecast) {
    if (actual.size() != forecast.size() || actual.empty()) {
        throw DataError("smape: actual and forecast must have equal nonzero length");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < actual.size(); ++i) {
        const double denom = std::abs(actual[i]) + std::abs(forecast[i]);
        if (denom > 0.0) sum += std::abs(actual[i] - forecast[i]) / denom;
    }
    return 2.0 / static_cast<double>(actual.size()) * sum * 100.0;
}

double mase(const std::vector<double>& actual, const std::vector<double>& forecast,
            const std::vector<double>& train, int period) {
    if (actual.size() != forecast.size() || actual.empty()) {
        throw DataError("mase: actual and forecast must have equal nonzero length");
    }
    const auto t = train.size();
    const auto m = static_cast<std::size_t>(period);
    if (period < 1 || t <= m) {
        throw DataError("mase: training series must be longer than the period");
    }

    double scale = 0.0;
    for (std::size_t i = m; i < t; ++i) scale += std::abs(train[i] - train[i - m]);
    scale /= static_cast<double>(t - m);
    if (scale == 0.0) {
        throw DataError("mase: seasonally constant training series, denominator is zero");
    }

    double mae = 0.0;
    for (std::size_t i = 0; i < actual.size(); ++i) mae += std::abs(actual[i] - forecast[i]);
    mae /= static_cast<double>(actual.size());
    return mae / scale;
}

namespace {

/// Centered moving average of window m (2xm when m is even). Defined on
/// t in [half, T - half - 1] with half = m/2 for even m, (m-1)/2 for odd.
void moving_average_trend(const std::vector<double>& y, int period, std::vector<double>& trend,
                          std::size_t& first, std::size_t& last) {
    const std::size_t t = y.size();
    const auto m = static_cast<std::size_t>(period);
    const bool even = period % 2 == 0;
    const std::size_t half = even ? m / 2 : (m - 1) / 2;
    first = half;
    last = t - half - 1;
    trend.assign(t, 0.0);
    for (std::size_t i = first; i <= last; ++i) {
        double sum = 0.0;
        if (even) {
            sum += 0.5 * y[i - half] + 0.5 * y[i + half];
            for (std::size_t j = i - half + 1; j < i + half; ++j) sum += y[j];
        } else {
            for (std::size_t j = i - half; j <= i + half; ++j) sum += y[j];
        }
        trend[i] = sum / static_cast<double>(m);
    }
}

/// Least-squares line through (idx, values[idx]) for idx in [from, to].
std::pair<double, double> fit_line(const std::vector<double>& values, std::size_t from,
                                   std::size_t to) {
    const double n = static_cast<double>(to - from + 1);
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = from; i <= to; ++i) {
        const double x = static_cast<double>(i);
        sx += x;
        sy += values[i];
        sxx += x * x;
        sxy += x * values[i];
    }
    const double denom = n * sxx - sx * sx;
    const double slope = denom != 0.0 ? (n * sxy - sx * sy) / denom : 0.0;
    const double intercept = (sy - slope * sx) / n;
    return {intercept, slope};
}

double population_variance(const std::vector<double>& v) {
    double mean = 0.0;
    for (const double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    double var = 0.0;
    for (const double x : v) var += (x - mean) * (x - mean);
    return var / static_cast<double>(v.size());
}

Strength strength_against(const std::vector<double>& remainder,
                          const std::vector<double>& component) {
    std::vector<double> reference(remainder.size());
    for (std::size_t i = 0; i < remainder.size(); ++i) {
        reference[i] = component[i] + remainder[i];
    }
    const double var_ref = population_variance(reference);
    if (var_ref == 0.0) return {0.0, true};
    const double ratio = population_variance(remainder) / var_ref;
    return {std::max(0.0, 1.0 - ratio), false};
}

}  // namespace

Decomposition decompose_additive(const std::vector<double>& y, int period) {
    const std::size_t t = y.size();
    if (period < 2) throw DataError("decompose_additive: period must be >= 2");
    if (t < 2 * static_cast<std::size_t>(period) + 1) {
        throw DataError("decompose_additive: series of length " + std::to_string(t) +
                        " is too short for period " + std::to_string(period) +
                        " (need >= 2m + 1)");
    }

    Decomposition out;
    std::size_t first = 0, last = 0;
    moving_average_trend(y, period, out.trend, first, last);

    // Extend the trend to the endpoints with a line fitted through the first
    // and last m interior trend values.
    const auto m = static_cast<std::size_t>(period);
    {
        const auto [b0, b1] = fit_line(out.trend, first, std::min(first + m - 1, last));
        for (std::size_t i = 0; i < first; ++i) out.trend[i] = b0 + b1 * static_cast<double>(i);
    }
    {
        const auto [b0, b1] = fit_line(out.trend, last >= m - 1 ? last - m + 1 : first, last);
        for (std::size_t i = last + 1; i < t; ++i) {
            out.trend[i] = b0 + b1 * static_cast<double>(i);
        }
    }

    // Per-season means of the detrended series, re-centered to sum to zero.
    std::vector<double> season_mean(m, 0.0);
    std::vector<std::size_t> season_count(m, 0);
    for (std::size_t i = 0; i < t; ++i) {
        season_mean[i % m] += y[i] - out.trend[i];
        ++season_count[i % m];
    }
    double grand = 0.0;
    for (std::size_t s = 0; s < m; ++s) {
        season_mean[s] /= static_cast<double>(season_count[s]);
        grand += season_mean[s];
    }
    grand /= static_cast<double>(m);
    for (auto& v : season_mean) v -= grand;

    out.seasonal.resize(t);
    out.remainder.resize(t);
    for (std::size_t i = 0; i < t; ++i) {
        out.seasonal[i] = season_mean[i % m];
        out.remainder[i] = y[i] - out.trend[i] - out.seasonal[i];
    }
    return out;
}

Strength strength_of_trend(const Decomposition& components) {
    return strength_against(components.remainder, components.trend);
}

Strength strength_of_seasonality(const Decomposition& components) {
    return strength_against(components.remainder, components.seasonal);
}

DescriptiveStats describe(std::vector<double> values) {
    if (values.empty()) throw DataError("describe: no values");
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();

    // Type-7 quantile: linear interpolation at (n-1) * p.
    const auto quantile = [&](double p) {
        const double pos = p * static_cast<double>(n - 1);
        const auto lo = static_cast<std::size_t>(std::floor(pos));
        const std::size_t hi = std::min(lo + 1, n - 1);
        const double frac = pos - static_cast<double>(lo);
        return values[lo] + frac * (values[hi] - values[lo]);
    };

    DescriptiveStats stats;
    stats.n = n;
    stats.min = values.front();
    stats.max = values.back();
    stats.q1 = quantile(0.25);
    stats.median = quantile(0.5);
    stats.q3 = quantile(0.75);
    double mean = 0.0;
    for (const double v : values) mean += v;
    mean /= static_cast<double>(n);
    stats.mean = mean;
    if (n > 1) {
        double ss = 0.0;
        for (const double v : values) ss += (v - mean) * (v - mean);
        stats.std_dev = std::sqrt(ss / static_cast<double>(n - 1));
    }
    return stats;
}

std::vector<ModelSummary> aggregate(const std::vector<AccuracyRecord>& records) {
    if (records.empty()) throw DataError("aggregate: no records");

    std::map<std::string, std::vector<const AccuracyRecord*>> by_model;
    for (const auto& rec : records) by_model[rec.model_id].push_back(&rec);

    std::vector<ModelSummary> rows;
    rows.reserve(by_model.size());
    for (const auto& [model_id, recs] : by_model) {
        ModelSummary row;
        row.model_id = model_id;
        row.n = recs.size();
        std::vector<double> mase_values;
        std::vector<double> smape_values;
        for (const auto* rec : recs) {
            if (rec->mase.has_value()) {
                mase_values.push_back(*rec->mase);
            } else {
                ++row.n_degenerate;
            }
            smape_values.push_back(rec->smape_pct);
            row.total_elapsed += rec->elapsed_seconds;
        }
        if (!mase_values.empty()) row.mase = describe(std::move(mase_values));
        row.smape = describe(std::move(smape_values));
        row.mean_elapsed = row.total_elapsed / static_cast<double>(row.n);
        rows.push_back(std::move(row));
    }
    std::sort(rows.begin(), rows.end(), [](const ModelSummary& a, const ModelSummary& b) {
        if (a.mase.n == 0) return false;
        if (b.mase.n == 0) return true;
        if (a.mase.mean != b.mase.mean) return a.mase.mean < b.mase.mean;
        return a.model_id < b.model_id;
    });
    return rows;
}

}  // namespace esn
