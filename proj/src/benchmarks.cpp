#include "esn/benchmarks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "esn/errors.hpp"

namespace esn {

const char* benchmark_name(BenchmarkKind kind) {
    switch (kind) {
        case BenchmarkKind::Naive: return "NAIVE";
        case BenchmarkKind::Drift: return "DRIFT";
        case BenchmarkKind::SeasonalNaive: return "SNAIVE";
        case BenchmarkKind::Mean: return "MEAN";
        case BenchmarkKind::Theta: return "THETA";
    }
    return "?";
}

BenchmarkKind benchmark_from_name(const std::string& name) {
    if (name == "NAIVE" || name == "naive") return BenchmarkKind::Naive;
    if (name == "DRIFT" || name == "drift") return BenchmarkKind::Drift;
    if (name == "SNAIVE" || name == "snaive") return BenchmarkKind::SeasonalNaive;
    if (name == "MEAN" || name == "mean") return BenchmarkKind::Mean;
    if (name == "THETA" || name == "theta") return BenchmarkKind::Theta;
    throw DataError("unknown benchmark '" + name + "'");
}

namespace {

void require_length(std::size_t have, std::size_t need, const char* method) {
    if (have < need) {
        throw DataError(std::string(method) + ": training series of length " +
                        std::to_string(have) + " is too short (need >= " +
                        std::to_string(need) + ")");
    }
}

std::vector<double> naive(const std::vector<double>& train, int horizon) {
    require_length(train.size(), 1, "NAIVE");
    return std::vector<double>(static_cast<std::size_t>(horizon), train.back());
}

std::vector<double> drift(const std::vector<double>& train, int horizon) {
    require_length(train.size(), 2, "DRIFT");
    const double t = static_cast<double>(train.size());
    const double slope = (train.back() - train.front()) / (t - 1.0);
    std::vector<double> out(static_cast<std::size_t>(horizon));
    for (int k = 1; k <= horizon; ++k) {
        out[static_cast<std::size_t>(k - 1)] = train.back() + static_cast<double>(k) * slope;
    }
    return out;
}

std::vector<double> seasonal_naive(const std::vector<double>& train, int period, int horizon) {
    require_length(train.size(), static_cast<std::size_t>(period) + 1, "SNAIVE");
    const auto t = static_cast<long>(train.size());
    std::vector<double> out(static_cast<std::size_t>(horizon));
    for (long k = 1; k <= horizon; ++k) {
        const long cycles = (k + period - 1) / period;  // ceil(k/m)
        const long idx = t + k - cycles * period;       // 1-based
        out[static_cast<std::size_t>(k - 1)] = train[static_cast<std::size_t>(idx - 1)];
    }
    return out;
}

std::vector<double> mean_forecast(const std::vector<double>& train, int horizon) {
    require_length(train.size(), 1, "MEAN");
    const double mean = std::accumulate(train.begin(), train.end(), 0.0) /
                        static_cast<double>(train.size());
    return std::vector<double>(static_cast<std::size_t>(horizon), mean);
}

/// Lag-m autocorrelation against the M4-style 90% band: seasonal when
/// r_m > 1.645 sqrt((1 + 2 sum_{i<m} r_i^2) / T).
bool is_seasonal(const std::vector<double>& y, int period) {
    const std::size_t t = y.size();
    const auto m = static_cast<std::size_t>(period);
    if (period < 2 || t < 3 * m) return false;

    double mean = std::accumulate(y.begin(), y.end(), 0.0) / static_cast<double>(t);
    double denom = 0.0;
    for (const double v : y) denom += (v - mean) * (v - mean);
    if (denom == 0.0) return false;

    const auto acf_at = [&](std::size_t lag) {
        double num = 0.0;
        for (std::size_t i = lag; i < t; ++i) num += (y[i] - mean) * (y[i - lag] - mean);
        return num / denom;
    };

    double sum_sq = 0.0;
    for (std::size_t lag = 1; lag < m; ++lag) {
        const double r = acf_at(lag);
        sum_sq += r * r;
    }
    const double band = 1.645 * std::sqrt((1.0 + 2.0 * sum_sq) / static_cast<double>(t));
    return acf_at(m) > band;
}

/// Multiplicative seasonal indices from a classical decomposition; empty when
/// the data cannot support one (non-positive trend values).
std::vector<double> seasonal_indices(const std::vector<double>& y, int period) {
    const std::size_t t = y.size();
    const auto m = static_cast<std::size_t>(period);
    const bool even = period % 2 == 0;
    const std::size_t half = even ? m / 2 : (m - 1) / 2;
    if (t < 2 * m) return {};

    std::vector<double> ratio_sum(m, 0.0);
    std::vector<std::size_t> ratio_count(m, 0);
    for (std::size_t i = half; i + half < t; ++i) {
        double trend;
        if (even) {
            double sum = 0.5 * y[i - half] + 0.5 * y[i + half];
            for (std::size_t j = i - half + 1; j < i + half; ++j) sum += y[j];
            trend = sum / static_cast<double>(m);
        } else {
            double sum = 0.0;
            for (std::size_t j = i - half; j <= i + half; ++j) sum += y[j];
            trend = sum / static_cast<double>(m);
        }
        if (trend <= 0.0) return {};
        ratio_sum[i % m] += y[i] / trend;
        ++ratio_count[i % m];
    }

    std::vector<double> index(m, 1.0);
    double total = 0.0;
    for (std::size_t s = 0; s < m; ++s) {
        if (ratio_count[s] == 0) return {};
        index[s] = ratio_sum[s] / static_cast<double>(ratio_count[s]);
        total += index[s];
    }
    const double norm = total / static_cast<double>(m);
    if (norm <= 0.0) return {};
    for (auto& v : index) v /= norm;
    for (const double v : index) {
        if (v <= 0.0) return {};
    }
    return index;
}

/// SES level with the smoothing parameter chosen by a grid search on
/// [0.01, 0.99] (step 0.01) minimizing one-step in-sample squared error.
double ses_level(const std::vector<double>& y) {
    double best_sse = std::numeric_limits<double>::infinity();
    double best_level = y.back();
    for (int step = 1; step <= 99; ++step) {
        const double a = 0.01 * static_cast<double>(step);
        double level = y.front();
        double sse = 0.0;
        for (std::size_t i = 1; i < y.size(); ++i) {
            const double err = y[i] - level;
            sse += err * err;
            level += a * err;
        }
        if (sse < best_sse) {
            best_sse = sse;
            best_level = level;
        }
    }
    return best_level;
}

std::vector<double> theta(const std::vector<double>& train, int period, int horizon) {
    require_length(train.size(), static_cast<std::size_t>(period) + 1, "THETA");
    require_length(train.size(), 3, "THETA");

    std::vector<double> adjusted = train;
    std::vector<double> index;
    if (is_seasonal(train, period)) {
        index = seasonal_indices(train, period);
        if (!index.empty()) {
            for (std::size_t i = 0; i < adjusted.size(); ++i) {
                adjusted[i] = train[i] / index[i % index.size()];
            }
        }
    }

    const double level = ses_level(adjusted);

    // Drift: half the least-squares slope of the adjusted series.
    const double t = static_cast<double>(adjusted.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < adjusted.size(); ++i) {
        const double x = static_cast<double>(i + 1);
        sx += x;
        sy += adjusted[i];
        sxx += x * x;
        sxy += x * adjusted[i];
    }
    const double slope = (t * sxy - sx * sy) / (t * sxx - sx * sx);
    const double drift_per_step = 0.5 * slope;

    std::vector<double> out(static_cast<std::size_t>(horizon));
    for (int k = 1; k <= horizon; ++k) {
        double value = level + static_cast<double>(k) * drift_per_step;
        if (!index.empty()) {
            value *= index[(train.size() + static_cast<std::size_t>(k) - 1) % index.size()];
        }
        out[static_cast<std::size_t>(k - 1)] = value;
    }
    return out;
}

}  // namespace

std::vector<double> benchmark_forecast(BenchmarkKind kind, const std::vector<double>& train,
                                       int period, int horizon) {
    if (horizon < 1) throw DataError("benchmark_forecast: horizon must be >= 1");
    switch (kind) {
        case BenchmarkKind::Naive: return naive(train, horizon);
        case BenchmarkKind::Drift: return drift(train, horizon);
        case BenchmarkKind::SeasonalNaive: return seasonal_naive(train, period, horizon);
        case BenchmarkKind::Mean: return mean_forecast(train, horizon);
        case BenchmarkKind::Theta: return theta(train, period, horizon);
    }
    throw DataError("benchmark_forecast: unknown kind");
}

}  // namespace esn
