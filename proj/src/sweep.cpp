#include "esn/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "esn/errors.hpp"
#include "esn/metrics.hpp"
#include "esn/rng.hpp"

namespace esn {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

double parse_double(const std::string& s) {
    if (s == "nan") return kNan;
    double v;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        throw DataError("sweep records: cannot parse number '" + s + "'");
    }
    return v;
}

/// Grid axis values built from integer steps so labels carry no float drift.
std::vector<double> tenths(int from, int to) {
    std::vector<double> out;
    for (int i = from; i <= to; ++i) out.push_back(static_cast<double>(i) / 10.0);
    return out;
}

std::string format_param(double v) {
    std::ostringstream out;
    out.setf(std::ios::fixed);
    out.precision(1);
    out << v;
    return out.str();
}

}  // namespace

const char* sweep_status_name(SweepStatus status) {
    switch (status) {
        case SweepStatus::Ok: return "ok";
        case SweepStatus::Degenerate: return "degenerate";
        case SweepStatus::Failed: return "failed";
    }
    return "?";
}

SweepStatus sweep_status_from_name(const std::string& name) {
    if (name == "ok") return SweepStatus::Ok;
    if (name == "degenerate") return SweepStatus::Degenerate;
    if (name == "failed") return SweepStatus::Failed;
    throw DataError("sweep records: unknown status '" + name + "'");
}

std::vector<GridPoint> make_grid(const std::vector<IcKind>& ics,
                                 const std::vector<double>& alphas,
                                 const std::vector<double>& rhos,
                                 const std::vector<double>& taus) {
    if (ics.empty() || alphas.empty() || rhos.empty() || taus.empty()) {
        throw DataError("grid: every axis needs at least one value");
    }
    std::vector<GridPoint> grid;
    grid.reserve(ics.size() * alphas.size() * rhos.size() * taus.size());
    int index = 0;
    for (const IcKind ic : ics) {
        for (const double alpha : alphas) {
            for (const double rho : rhos) {
                for (const double tau : taus) {
                    grid.push_back({index++, ic, alpha, rho, tau});
                }
            }
        }
    }
    return grid;
}

std::vector<GridPoint> generate_grid() {
    return make_grid({IcKind::Aic, IcKind::Aicc, IcKind::Bic, IcKind::Hqc}, tenths(1, 10),
                     tenths(2, 12), {0.2, 0.4, 0.6});
}

EsnConfig config_from_grid(const GridPoint& point, std::uint64_t seed,
                           const EsnConfig& defaults) {
    EsnConfig config = defaults;
    config.alpha = point.alpha;
    config.rho = point.rho;
    config.tau = point.tau;
    config.ic_kind = point.ic;
    config.seed = seed;
    return config;
}

std::string records_csv_header() {
    return "series_id,config_index,mase,smape_pct,elapsed_seconds,seed,status";
}

std::string record_to_csv(const SweepRecord& r) {
    std::ostringstream out;
    out << r.series_id << ',' << r.config_index << ',' << format_double(r.mase) << ','
        << format_double(r.smape_pct) << ',' << format_double(r.elapsed_seconds) << ','
        << r.seed << ',' << sweep_status_name(r.status);
    return out.str();
}

SweepRecord record_from_csv(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 7) throw DataError("sweep records: malformed row '" + line + "'");
    SweepRecord r;
    r.series_id = cells[0];
    r.config_index = std::stoi(cells[1]);
    r.mase = parse_double(cells[2]);
    r.smape_pct = parse_double(cells[3]);
    r.elapsed_seconds = parse_double(cells[4]);
    r.seed = std::stoull(cells[5]);
    r.status = sweep_status_from_name(cells[6]);
    return r;
}

std::vector<SweepRecord> read_records_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open records file: " + path);
    std::vector<SweepRecord> records;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (first) {
            first = false;
            if (line == records_csv_header()) continue;
        }
        // A killed run may leave a truncated last line; skip what cannot be
        // parsed instead of refusing to resume.
        try {
            records.push_back(record_from_csv(line));
        } catch (const std::exception&) {
            continue;
        }
    }
    return records;
}

void write_records_csv(const std::string& path, const std::vector<SweepRecord>& records) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot open records file for writing: " + path);
    out << records_csv_header() << '\n';
    for (const auto& r : records) out << record_to_csv(r) << '\n';
}

namespace {

/// Append-only results store: records.csv plus a completed-pairs index that
/// makes resume cheap and tolerant of a truncated final record line.
class ResultsStore {
public:
    ResultsStore(const std::string& dir, bool resume) {
        namespace fs = std::filesystem;
        fs::create_directories(dir);
        records_path_ = (fs::path(dir) / "records.csv").string();
        index_path_ = (fs::path(dir) / "completed.idx").string();

        if (resume && fs::exists(records_path_)) {
            auto existing = read_records_csv(records_path_);
            std::set<std::pair<std::string, int>> indexed;
            if (fs::exists(index_path_)) {
                std::ifstream idx(index_path_);
                std::string line;
                while (std::getline(idx, line)) {
                    const auto comma = line.rfind(',');
                    if (comma == std::string::npos) continue;
                    try {
                        indexed.emplace(line.substr(0, comma),
                                        std::stoi(line.substr(comma + 1)));
                    } catch (const std::exception&) {
                        continue;
                    }
                }
            }
            // Keep only records confirmed by the index; a record without its
            // index line may be a torn write.
            for (auto& r : existing) {
                if (indexed.count({r.series_id, r.config_index}) > 0) {
                    completed_.emplace(r.series_id, r.config_index);
                    records_.push_back(std::move(r));
                }
            }
            write_records_csv(records_path_, records_);
            rewrite_index();
            records_out_.open(records_path_, std::ios::app);
            index_out_.open(index_path_, std::ios::app);
        } else {
            records_out_.open(records_path_, std::ios::trunc);
            records_out_ << records_csv_header() << '\n';
            records_out_.flush();
            index_out_.open(index_path_, std::ios::trunc);
        }
        if (!records_out_ || !index_out_) {
            throw DataError("results store: cannot open files under " + dir);
        }
    }

    bool completed(const std::string& series_id, int config_index) const {
        return completed_.count({series_id, config_index}) > 0;
    }

    void append(const SweepRecord& record) {
        const std::lock_guard<std::mutex> lock(mutex_);
        records_out_ << record_to_csv(record) << '\n';
        records_out_.flush();
        index_out_ << record.series_id << ',' << record.config_index << '\n';
        index_out_.flush();
        if (!records_out_ || !index_out_) {
            throw DataError("results store: write failed");
        }
        records_.push_back(record);
    }

    std::vector<SweepRecord> take_records() { return std::move(records_); }

private:
    void rewrite_index() {
        std::ofstream idx(index_path_, std::ios::trunc);
        for (const auto& [id, ci] : completed_) idx << id << ',' << ci << '\n';
    }

    std::string records_path_;
    std::string index_path_;
    std::ofstream records_out_;
    std::ofstream index_out_;
    std::set<std::pair<std::string, int>> completed_;
    std::vector<SweepRecord> records_;
    std::mutex mutex_;
};

SweepRecord execute_task(const SplitSeries& series, const GridPoint& point,
                         const SweepOptions& options) {
    SweepRecord record;
    record.series_id = series.id;
    record.config_index = point.config_index;
    record.seed = task_seed(options.master_seed, series.id,
                            static_cast<std::uint64_t>(point.config_index));
    record.mase = kNan;
    record.smape_pct = kNan;
    try {
        const auto config = config_from_grid(point, record.seed, options.defaults);
        const auto result = fit_forecast(series, series.frequency, config);
        record.elapsed_seconds = result.elapsed_seconds;
        record.smape_pct = smape(series.test, result.point_forecasts);
        try {
            record.mase = mase(series.test, result.point_forecasts, series.train,
                               series.frequency.period);
            record.status = SweepStatus::Ok;
        } catch (const DataError&) {  // seasonally constant training window
            record.mase = kNan;
            record.status = SweepStatus::Degenerate;
        }
    } catch (const std::exception&) {
        record.mase = kNan;
        record.smape_pct = kNan;
        record.status = SweepStatus::Failed;
    }
    return record;
}

}  // namespace

std::vector<SweepRecord> run_sweep(const std::vector<SplitSeries>& dataset,
                                   const std::vector<GridPoint>& grid,
                                   const SweepOptions& options) {
    if (dataset.empty()) throw DataError("run_sweep: dataset is empty");
    if (grid.empty()) throw DataError("run_sweep: grid is empty");

    std::unique_ptr<ResultsStore> store;
    if (!options.output_dir.empty()) {
        store = std::make_unique<ResultsStore>(options.output_dir, options.resume);
    }

    struct Task {
        const SplitSeries* series;
        const GridPoint* point;
    };
    std::vector<Task> tasks;
    tasks.reserve(dataset.size() * grid.size());
    for (const auto& series : dataset) {
        for (const auto& point : grid) {
            if (store && store->completed(series.id, point.config_index)) continue;
            tasks.push_back({&series, &point});
        }
    }

    const std::size_t total = dataset.size() * grid.size();
    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> done{total - tasks.size()};
    std::mutex collect_mutex;
    std::vector<SweepRecord> fresh;
    fresh.reserve(tasks.size());
    std::exception_ptr store_failure;

    const auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= tasks.size()) return;
            auto record = execute_task(*tasks[i].series, *tasks[i].point, options);
            {
                const std::lock_guard<std::mutex> lock(collect_mutex);
                if (store_failure) return;
                try {
                    if (store) store->append(record);
                } catch (...) {
                    store_failure = std::current_exception();
                    return;
                }
                fresh.push_back(std::move(record));
            }
            const std::size_t completed = done.fetch_add(1) + 1;
            if (options.progress) options.progress(completed, total);
        }
    };

    const int threads = std::max(1, options.parallelism);
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(threads));
        for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (store_failure) std::rethrow_exception(store_failure);

    std::vector<SweepRecord> records;
    if (store) {
        records = store->take_records();  // recovered + fresh, store order
    } else {
        records = std::move(fresh);
    }
    // Canonical order for deterministic outputs regardless of scheduling.
    std::sort(records.begin(), records.end(), [](const SweepRecord& a, const SweepRecord& b) {
        if (a.series_id != b.series_id) return a.series_id < b.series_id;
        return a.config_index < b.config_index;
    });
    return records;
}

namespace {

// Values are sorted before reduction so that summaries do not depend on
// record order, even at the last floating-point ulp.
double median_of(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    if (n % 2 == 1) return values[n / 2];
    return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

double mean_of(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    double sum = 0.0;
    for (const double v : values) sum += v;
    return sum / static_cast<double>(values.size());
}

}  // namespace

std::vector<RankingRow> rank_configs(const std::vector<SweepRecord>& records,
                                     const std::vector<GridPoint>& grid, std::size_t top_k,
                                     std::size_t* excluded_count) {
    std::map<int, const GridPoint*> points;
    for (const auto& p : grid) points[p.config_index] = &p;

    std::map<int, std::pair<std::vector<double>, std::vector<double>>> by_config;
    for (const auto& r : records) {
        if (r.status != SweepStatus::Ok) continue;
        auto& [mases, smapes] = by_config[r.config_index];
        mases.push_back(r.mase);
        smapes.push_back(r.smape_pct);
    }

    std::size_t excluded = 0;
    for (const auto& [index, point] : points) {
        if (by_config.find(index) == by_config.end()) ++excluded;
    }
    if (excluded_count != nullptr) *excluded_count = excluded;

    std::vector<RankingRow> rows;
    rows.reserve(by_config.size());
    for (const auto& [index, values] : by_config) {
        const auto it = points.find(index);
        if (it == points.end()) {
            throw DataError("rank_configs: record references unknown config_index " +
                            std::to_string(index));
        }
        RankingRow row;
        row.config_index = index;
        row.ic = it->second->ic;
        row.alpha = it->second->alpha;
        row.rho = it->second->rho;
        row.tau = it->second->tau;
        row.mean_mase = mean_of(values.first);
        row.median_mase = median_of(values.first);
        row.mean_smape = mean_of(values.second);
        row.median_smape = median_of(values.second);
        row.n_ok = values.first.size();
        rows.push_back(row);
    }
    std::sort(rows.begin(), rows.end(), [](const RankingRow& a, const RankingRow& b) {
        if (a.mean_mase != b.mean_mase) return a.mean_mase < b.mean_mase;
        return a.config_index < b.config_index;
    });
    if (rows.size() > top_k) rows.resize(top_k);
    for (std::size_t i = 0; i < rows.size(); ++i) rows[i].rank = static_cast<int>(i + 1);
    return rows;
}

std::vector<MarginalSummary> marginal_summaries(const std::vector<SweepRecord>& records,
                                                const std::vector<GridPoint>& grid) {
    std::map<int, const GridPoint*> points;
    for (const auto& p : grid) points[p.config_index] = &p;

    // parameter -> value label -> mase values
    std::map<std::string, std::map<std::string, std::vector<double>>> buckets;
    for (const auto& r : records) {
        if (r.status != SweepStatus::Ok) continue;
        const auto it = points.find(r.config_index);
        if (it == points.end()) continue;
        const GridPoint& p = *it->second;
        buckets["alpha"][format_param(p.alpha)].push_back(r.mase);
        buckets["rho"][format_param(p.rho)].push_back(r.mase);
        buckets["tau"][format_param(p.tau)].push_back(r.mase);
        buckets["ic"][ic_name(p.ic)].push_back(r.mase);
    }

    std::vector<MarginalSummary> out;
    for (const char* parameter : {"alpha", "rho", "tau", "ic"}) {
        const auto it = buckets.find(parameter);
        if (it == buckets.end()) continue;
        for (const auto& [value, mases] : it->second) {
            MarginalSummary row;
            row.parameter = parameter;
            row.value = value;
            row.median_mase = median_of(mases);
            row.n = mases.size();
            out.push_back(std::move(row));
        }
    }
    return out;
}

void write_ranking_csv(const std::string& path, const std::vector<RankingRow>& rows) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot open ranking file for writing: " + path);
    out << "rank,config_index,ic,alpha,rho,tau,mean_mase,median_mase,mean_smape,median_smape,"
           "n_ok\n";
    for (const auto& r : rows) {
        out << r.rank << ',' << r.config_index << ',' << ic_name(r.ic) << ','
            << format_param(r.alpha) << ',' << format_param(r.rho) << ',' << format_param(r.tau)
            << ',' << format_double(r.mean_mase) << ',' << format_double(r.median_mase) << ','
            << format_double(r.mean_smape) << ',' << format_double(r.median_smape) << ','
            << r.n_ok << '\n';
    }
}

void write_marginals_csv(const std::string& path, const std::vector<MarginalSummary>& rows) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot open marginals file for writing: " + path);
    out << "parameter,value,median_mase,n\n";
    for (const auto& r : rows) {
        out << r.parameter << ',' << r.value << ',' << format_double(r.median_mase) << ','
            << r.n << '\n';
    }
}

void write_sweep_summary(const std::string& path, const std::vector<SweepRecord>& records,
                         const std::vector<RankingRow>& ranking) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot open summary file for writing: " + path);

    std::size_t ok = 0, degenerate = 0, failed = 0;
    double total_elapsed = 0.0;
    std::set<std::string> series_ids;
    for (const auto& r : records) {
        series_ids.insert(r.series_id);
        if (!std::isnan(r.elapsed_seconds)) total_elapsed += r.elapsed_seconds;
        switch (r.status) {
            case SweepStatus::Ok: ++ok; break;
            case SweepStatus::Degenerate: ++degenerate; break;
            case SweepStatus::Failed: ++failed; break;
        }
    }

    out << "sweep summary\n";
    out << "=============\n";
    out << "series:            " << series_ids.size() << '\n';
    out << "records:           " << records.size() << '\n';
    out << "  ok:              " << ok << '\n';
    out << "  degenerate:      " << degenerate << '\n';
    out << "  failed:          " << failed << '\n';
    out << "total fit seconds: " << format_double(total_elapsed) << '\n';
    if (!records.empty()) {
        out << "mean fit seconds:  "
            << format_double(total_elapsed / static_cast<double>(records.size())) << '\n';
    }
    out << '\n';
    if (!ranking.empty()) {
        const auto& best = ranking.front();
        out << "best configuration by mean MASE\n";
        out << "  config_index: " << best.config_index << '\n';
        out << "  ic:           " << ic_name(best.ic) << '\n';
        out << "  alpha:        " << format_param(best.alpha) << '\n';
        out << "  rho:          " << format_param(best.rho) << '\n';
        out << "  tau:          " << format_param(best.tau) << '\n';
        out << "  mean MASE:    " << format_double(best.mean_mase) << '\n';
        out << "  median MASE:  " << format_double(best.median_mase) << '\n';
    }
}

}  // namespace esn
