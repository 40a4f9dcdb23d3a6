#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "esn/forecaster.hpp"
#include "esn/time_series.hpp"

namespace esn {

/// One cell of the hyperparameter grid. config_index is the canonical
/// enumeration: information criterion outermost (AIC, AICc, BIC, HQC), then
/// alpha ascending, then rho ascending, then tau ascending.
struct GridPoint {
    int config_index = 0;
    IcKind ic = IcKind::Aic;
    double alpha = 1.0;
    double rho = 0.9;
    double tau = 0.4;
};

/// The full 1,320-point grid: alpha 0.1..1.0 (step 0.1), rho 0.2..1.2
/// (step 0.1), tau in {0.2, 0.4, 0.6}, all four information criteria.
std::vector<GridPoint> generate_grid();

/// Grid restricted to explicit value lists, same canonical ordering. Indices
/// refer to positions in this restricted grid.
std::vector<GridPoint> make_grid(const std::vector<IcKind>& ics,
                                 const std::vector<double>& alphas,
                                 const std::vector<double>& rhos,
                                 const std::vector<double>& taus);

/// Instantiates a per-task EsnConfig from a grid point and its derived seed.
EsnConfig config_from_grid(const GridPoint& point, std::uint64_t seed,
                           const EsnConfig& defaults = EsnConfig{});

enum class SweepStatus { Ok, Degenerate, Failed };

const char* sweep_status_name(SweepStatus status);
SweepStatus sweep_status_from_name(const std::string& name);

struct SweepRecord {
    std::string series_id;
    int config_index = 0;
    double mase = 0.0;       // NaN unless status == Ok
    double smape_pct = 0.0;  // NaN unless status == Ok
    double elapsed_seconds = 0.0;
    std::uint64_t seed = 0;
    SweepStatus status = SweepStatus::Ok;
};

struct SweepOptions {
    std::uint64_t master_seed = 42;
    int parallelism = 1;
    std::string output_dir;  // empty: in-memory only (no store, no resume)
    bool resume = false;
    EsnConfig defaults;  // structural constants applied to every config
    std::function<void(std::size_t done, std::size_t total)> progress;
};

/// Executes every (series, configuration) pair exactly once. With an output
/// directory the records stream to an append-only CSV plus a completed-pairs
/// index; resume skips pairs already present. Failures become records with
/// status=failed and never abort the sweep.
std::vector<SweepRecord> run_sweep(const std::vector<SplitSeries>& dataset,
                                   const std::vector<GridPoint>& grid,
                                   const SweepOptions& options);

struct RankingRow {
    int rank = 0;
    int config_index = 0;
    IcKind ic = IcKind::Aic;
    double alpha = 0.0;
    double rho = 0.0;
    double tau = 0.0;
    double mean_mase = 0.0;
    double median_mase = 0.0;
    double mean_smape = 0.0;
    double median_smape = 0.0;
    std::size_t n_ok = 0;
};

/// Per-configuration means/medians over ok records, sorted by mean MASE
/// ascending with ties broken by config_index. Configurations without any ok
/// record are excluded; excluded_count reports how many.
std::vector<RankingRow> rank_configs(const std::vector<SweepRecord>& records,
                                     const std::vector<GridPoint>& grid, std::size_t top_k,
                                     std::size_t* excluded_count = nullptr);

struct MarginalSummary {
    std::string parameter;  // alpha | rho | tau | ic
    std::string value;
    double median_mase = 0.0;
    std::size_t n = 0;
};

/// Median MASE per hyperparameter value, marginalizing over the rest.
std::vector<MarginalSummary> marginal_summaries(const std::vector<SweepRecord>& records,
                                                const std::vector<GridPoint>& grid);

// Results-store and report files.
std::string records_csv_header();
std::string record_to_csv(const SweepRecord& record);
SweepRecord record_from_csv(const std::string& line);
std::vector<SweepRecord> read_records_csv(const std::string& path);

void write_records_csv(const std::string& path, const std::vector<SweepRecord>& records);
void write_ranking_csv(const std::string& path, const std::vector<RankingRow>& rows);
void write_marginals_csv(const std::string& path, const std::vector<MarginalSummary>& rows);
void write_sweep_summary(const std::string& path, const std::vector<SweepRecord>& records,
                         const std::vector<RankingRow>& ranking);

}  // namespace esn
