#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace esn {

enum class FrequencyKind { Monthly, Quarterly };

/// Season length m, forecast horizon h and the history cap (20 years of
/// observations) used when filtering.
struct Frequency {
    FrequencyKind kind = FrequencyKind::Monthly;
    int period = 12;      // m
    int horizon = 18;     // h
    int max_length = 240;

    static Frequency monthly() { return {FrequencyKind::Monthly, 12, 18, 240}; }
    static Frequency quarterly() { return {FrequencyKind::Quarterly, 4, 8, 80}; }
    static Frequency from_name(const std::string& name);
    const char* name() const;

    /// Shortest usable history: one test window plus two seasonal cycles.
    int min_length() const { return 2 * period + horizon; }
};

struct TimeSeries {
    std::string id;
    Frequency frequency;
    std::vector<double> values;

    std::size_t length() const { return values.size(); }
};

struct SplitSeries {
    std::string id;
    Frequency frequency;
    std::vector<double> train;
    std::vector<double> test;
};

struct SampledDatasets {
    std::vector<std::string> parameter_ids;
    std::vector<std::string> forecast_ids;
    std::uint64_t seed = 0;
};

/// Parses an M4-format CSV: row = series id followed by numeric cells,
/// ragged rows padded with trailing empties. An optional header row is
/// skipped. Malformed numeric cells raise DataError naming row and column.
std::vector<TimeSeries> parse_m4_csv(const std::string& path, const Frequency& frequency);
std::vector<TimeSeries> parse_m4_csv(std::istream& in, const std::string& source_name,
                                     const Frequency& frequency);

/// Writes the same dialect back (id,v1,v2,...), one row per series.
void write_m4_csv(const std::string& path, const std::vector<TimeSeries>& series,
                  bool header = true);
void write_m4_csv(std::ostream& out, const std::vector<TimeSeries>& series,
                  bool header = true);

/// Keeps series with min_length() <= T <= max_length, preserving order.
std::vector<TimeSeries> filter_by_length(const std::vector<TimeSeries>& series);

/// Last h observations become the test window.
SplitSeries split_train_test(const TimeSeries& series);

std::vector<SplitSeries> split_all(const std::vector<TimeSeries>& series);

/// Matches train and test files by id; every train series must have a test
/// counterpart of exactly horizon length.
std::vector<SplitSeries> pair_train_test(const std::vector<TimeSeries>& train,
                                         const std::vector<TimeSeries>& test);

/// Draws two disjoint id sets of n_each series without replacement. Ids are
/// sorted before sampling, so the result depends only on the id set and seed,
/// not on file row order.
SampledDatasets sample_disjoint(const std::vector<TimeSeries>& pool, std::size_t n_each,
                                std::uint64_t seed);

/// FNV-1a over the sorted id list; recorded in sampling manifests.
std::uint64_t pool_hash(const std::vector<TimeSeries>& pool);

}  // namespace esn
