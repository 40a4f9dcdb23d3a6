#include "esn/time_series.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "esn/errors.hpp"
#include "esn/rng.hpp"

namespace esn {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

std::string strip_quotes(std::string s) {
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') {
        return s.substr(1, s.size() - 2);
    }
    return s;
}

bool parse_double(const std::string& cell, double& out) {
    const char* begin = cell.data();
    const char* end = begin + cell.size();
    const auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc{} && ptr == end;
}

std::vector<std::string> split_cells(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(strip_quotes(trim(cell)));
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

std::string format_double(double v) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

}  // namespace

Frequency Frequency::from_name(const std::string& name) {
    if (name == "monthly") return monthly();
    if (name == "quarterly") return quarterly();
    throw DataError("unknown frequency '" + name + "' (expected monthly or quarterly)");
}

const char* Frequency::name() const {
    return kind == FrequencyKind::Monthly ? "monthly" : "quarterly";
}

std::vector<TimeSeries> parse_m4_csv(const std::string& path, const Frequency& frequency) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open file: " + path);
    return parse_m4_csv(in, path, frequency);
}

std::vector<TimeSeries> parse_m4_csv(std::istream& in, const std::string& source_name,
                                     const Frequency& frequency) {
    std::vector<TimeSeries> series;
    std::string line;
    std::size_t row = 0;
    bool first_content_row = true;
    while (std::getline(in, line)) {
        ++row;
        if (trim(line).empty()) continue;
        auto cells = split_cells(line);
        if (cells.empty() || cells[0].empty()) {
            throw DataError(source_name + ": row " + std::to_string(row) +
                            " has no series id");
        }

        // A header row is recognized by a non-numeric, non-empty second cell.
        if (first_content_row && cells.size() > 1 && !cells[1].empty()) {
            double probe;
            if (!parse_double(cells[1], probe)) {
                first_content_row = false;
                continue;
            }
        }
        first_content_row = false;

        // Drop trailing empties; empties before the last value are an error
        // (M4 series are contiguous).
        std::size_t last_value = cells.size();
        while (last_value > 1 && cells[last_value - 1].empty()) --last_value;

        TimeSeries ts;
        ts.id = cells[0];
        ts.frequency = frequency;
        ts.values.reserve(last_value - 1);
        for (std::size_t col = 1; col < last_value; ++col) {
            if (cells[col].empty()) {
                throw DataError(source_name + ": row " + std::to_string(row) + ", column " +
                                std::to_string(col + 1) + ": missing value inside series '" +
                                ts.id + "'");
            }
            double v;
            if (!parse_double(cells[col], v) || !std::isfinite(v)) {
                throw DataError(source_name + ": row " + std::to_string(row) + ", column " +
                                std::to_string(col + 1) + ": cannot parse numeric cell '" +
                                cells[col] + "'");
            }
            ts.values.push_back(v);
        }
        series.push_back(std::move(ts));
    }
    if (series.empty()) throw DataError(source_name + ": no series found");
    return series;
}

void write_m4_csv(const std::string& path, const std::vector<TimeSeries>& series, bool header) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot open file for writing: " + path);
    write_m4_csv(out, series, header);
}

void write_m4_csv(std::ostream& out, const std::vector<TimeSeries>& series, bool header) {
    if (header) {
        std::size_t width = 0;
        for (const auto& ts : series) width = std::max(width, ts.values.size());
        out << "id";
        for (std::size_t i = 1; i <= width; ++i) out << ",V" << i;
        out << "\n";
    }
    for (const auto& ts : series) {
        out << ts.id;
        for (const double v : ts.values) out << ',' << format_double(v);
        out << "\n";
    }
}

std::vector<TimeSeries> filter_by_length(const std::vector<TimeSeries>& series) {
    std::vector<TimeSeries> kept;
    for (const auto& ts : series) {
        const auto t = static_cast<int>(ts.length());
        if (t >= ts.frequency.min_length() && t <= ts.frequency.max_length) {
            kept.push_back(ts);
        }
    }
    return kept;
}

SplitSeries split_train_test(const TimeSeries& series) {
    const int h = series.frequency.horizon;
    if (static_cast<int>(series.length()) <= h) {
        throw DataError("series '" + series.id + "' is too short to split: length " +
                        std::to_string(series.length()) + " <= horizon " + std::to_string(h));
    }
    SplitSeries split;
    split.id = series.id;
    split.frequency = series.frequency;
    split.train.assign(series.values.begin(), series.values.end() - h);
    split.test.assign(series.values.end() - h, series.values.end());
    return split;
}

std::vector<SplitSeries> split_all(const std::vector<TimeSeries>& series) {
    std::vector<SplitSeries> out;
    out.reserve(series.size());
    for (const auto& ts : series) out.push_back(split_train_test(ts));
    return out;
}

std::vector<SplitSeries> pair_train_test(const std::vector<TimeSeries>& train,
                                         const std::vector<TimeSeries>& test) {
    std::unordered_map<std::string, const TimeSeries*> by_id;
    for (const auto& ts : test) by_id[ts.id] = &ts;
    std::vector<SplitSeries> out;
    out.reserve(train.size());
    for (const auto& tr : train) {
        const auto it = by_id.find(tr.id);
        if (it == by_id.end()) {
            throw DataError("no test series for id '" + tr.id + "'");
        }
        const auto& te = *it->second;
        if (static_cast<int>(te.length()) != tr.frequency.horizon) {
            throw DataError("test series '" + tr.id + "' has length " +
                            std::to_string(te.length()) + ", expected horizon " +
                            std::to_string(tr.frequency.horizon));
        }
        SplitSeries split;
        split.id = tr.id;
        split.frequency = tr.frequency;
        split.train = tr.values;
        split.test = te.values;
        out.push_back(std::move(split));
    }
    return out;
}

SampledDatasets sample_disjoint(const std::vector<TimeSeries>& pool, std::size_t n_each,
                                std::uint64_t seed) {
    if (pool.size() < 2 * n_each) {
        throw DataError("pool of " + std::to_string(pool.size()) +
                        " series is too small: sampling two disjoint sets of " +
                        std::to_string(n_each) + " requires at least " +
                        std::to_string(2 * n_each));
    }
    std::vector<std::string> ids;
    ids.reserve(pool.size());
    for (const auto& ts : pool) ids.push_back(ts.id);
    std::sort(ids.begin(), ids.end());

    // Partial Fisher-Yates: the first 2*n_each slots become the sample.
    Rng rng(seed);
    const std::size_t take = 2 * n_each;
    for (std::size_t i = 0; i < take; ++i) {
        const std::size_t j = i + static_cast<std::size_t>(rng.bounded(ids.size() - i));
        std::swap(ids[i], ids[j]);
    }

    SampledDatasets out;
    out.seed = seed;
    out.parameter_ids.assign(ids.begin(), ids.begin() + static_cast<std::ptrdiff_t>(n_each));
    out.forecast_ids.assign(ids.begin() + static_cast<std::ptrdiff_t>(n_each),
                            ids.begin() + static_cast<std::ptrdiff_t>(take));
    return out;
}

std::uint64_t pool_hash(const std::vector<TimeSeries>& pool) {
    std::vector<std::string> ids;
    ids.reserve(pool.size());
    for (const auto& ts : pool) ids.push_back(ts.id);
    std::sort(ids.begin(), ids.end());
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (const auto& id : ids) {
        for (const unsigned char c : id) {
            h ^= c;
            h *= 0x100000001B3ULL;
        }
        h ^= 0x1FU;  // separator
        h *= 0x100000001B3ULL;
    }
    return h;
}

}  // namespace esn
