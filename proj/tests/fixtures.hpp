#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "esn/rng.hpp"
#include "esn/time_series.hpp"

namespace fixtures {

/// Seasonal + trend + noise series in M4-like positive units.
inline esn::TimeSeries synthetic_series(const std::string& id, const esn::Frequency& freq,
                                        std::size_t length, std::uint64_t seed) {
    esn::Rng rng(seed);
    const double base = rng.uniform(50.0, 200.0);
    const double slope = rng.uniform(0.2, 1.5);
    const double amplitude = rng.uniform(5.0, 25.0);
    const double phase = rng.uniform(0.0, 2.0 * M_PI);
    const double sigma = rng.uniform(1.0, 4.0);

    esn::TimeSeries ts;
    ts.id = id;
    ts.frequency = freq;
    ts.values.resize(length);
    for (std::size_t t = 0; t < length; ++t) {
        const double season =
            amplitude * std::sin(2.0 * M_PI * static_cast<double>(t) / freq.period + phase);
        ts.values[t] = base + slope * static_cast<double>(t) + season + sigma * rng.normal();
    }
    return ts;
}

inline std::vector<esn::SplitSeries> synthetic_dataset(const esn::Frequency& freq,
                                                       std::size_t count, std::size_t length,
                                                       std::uint64_t seed) {
    std::vector<esn::SplitSeries> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const auto ts = synthetic_series(
            (freq.kind == esn::FrequencyKind::Monthly ? "M" : "Q") + std::to_string(i + 1),
            freq, length, seed + i);
        out.push_back(esn::split_train_test(ts));
    }
    return out;
}

}  // namespace fixtures
