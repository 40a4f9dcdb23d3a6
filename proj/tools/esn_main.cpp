#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "esn/benchmarks.hpp"
#include "esn/errors.hpp"
#include "esn/forecaster.hpp"
#include "esn/metrics.hpp"
#include "esn/rng.hpp"
#include "esn/sweep.hpp"
#include "esn/time_series.hpp"

namespace fs = std::filesystem;

namespace {

// Exit codes: 0 success, 1 usage, 2 data error, 3 numeric failure.
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNumeric = 3;

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

struct IoOptions {
    std::string data_path;
    std::string train_path;
    std::string test_path;
    std::string freq_name = "monthly";

    esn::Frequency frequency() const { return esn::Frequency::from_name(freq_name); }
};

void add_io_options(CLI::App* cmd, IoOptions& io, bool need_test) {
    auto* data = cmd->add_option("--data", io.data_path,
                                 "Whole-series CSV; the last horizon observations become "
                                 "the test window");
    auto* train = cmd->add_option("--train", io.train_path, "Pre-split training CSV");
    cmd->add_option("--freq", io.freq_name, "Series frequency: monthly or quarterly")
        ->check(CLI::IsMember({"monthly", "quarterly"}))
        ->capture_default_str();
    if (need_test) {
        auto* test = cmd->add_option("--test", io.test_path,
                                     "Pre-split test CSV (horizon values per id)");
        train->needs(test);
        test->needs(train);
        data->excludes(train);
    }
}

std::vector<esn::SplitSeries> load_split_dataset(const IoOptions& io) {
    const auto freq = io.frequency();
    if (!io.data_path.empty()) {
        return esn::split_all(esn::parse_m4_csv(io.data_path, freq));
    }
    if (!io.train_path.empty() && !io.test_path.empty()) {
        return esn::pair_train_test(esn::parse_m4_csv(io.train_path, freq),
                                    esn::parse_m4_csv(io.test_path, freq));
    }
    throw esn::DataError("no input: pass --data or --train/--test");
}

struct ConfigFlags {
    double alpha = 1.0;
    double rho = 0.9;
    double tau = 0.4;
    std::string ic = "AICc";
    double density = 0.5;
    double washout_frac = 0.05;
    double lambda_lo = 1e-4;
    double lambda_hi = 2.0;
    int k_multiplier = 2;
    int reservoir_cap = 200;
    double kpss_significance = 0.05;
    int max_diff_order = 2;

    CLI::Option* rho_opt = nullptr;
    CLI::Option* tau_opt = nullptr;
    CLI::Option* ic_opt = nullptr;

    /// The sweep-winning settings depend on the frequency; unset flags fall
    /// back to the per-frequency defaults.
    void apply_frequency_defaults(const esn::Frequency& freq) {
        if (freq.kind == esn::FrequencyKind::Quarterly) {
            if (rho_opt != nullptr && rho_opt->count() == 0) rho = 0.4;
            if (tau_opt != nullptr && tau_opt->count() == 0) tau = 0.6;
            if (ic_opt != nullptr && ic_opt->count() == 0) ic = "AIC";
        }
    }

    /// Level-stationarity critical values for the supported significance
    /// levels.
    double kpss_critical_value() const {
        if (kpss_significance == 0.10) return 0.347;
        if (kpss_significance == 0.05) return 0.463;
        if (kpss_significance == 0.025) return 0.574;
        if (kpss_significance == 0.01) return 0.739;
        throw esn::DataError("unsupported KPSS significance level");
    }

    esn::EsnConfig build(std::uint64_t seed) const {
        esn::EsnConfig config;
        config.alpha = alpha;
        config.rho = rho;
        config.tau = tau;
        config.ic_kind = esn::ic_from_name(ic);
        config.density = density;
        config.washout_frac = washout_frac;
        config.lambda_lo = lambda_lo;
        config.lambda_hi = lambda_hi;
        config.k_multiplier = k_multiplier;
        config.reservoir_cap = reservoir_cap;
        config.kpss_critical_value = kpss_critical_value();
        config.max_diff_order = max_diff_order;
        config.seed = seed;
        config.validate();
        return config;
    }
};

void add_config_flags(CLI::App* cmd, ConfigFlags& flags) {
    cmd->add_option("--alpha", flags.alpha, "Leakage rate in (0, 1]")->capture_default_str();
    flags.rho_opt = cmd->add_option("--rho", flags.rho,
                                    "Target spectral radius (default 0.9 monthly, "
                                    "0.4 quarterly)");
    flags.tau_opt = cmd->add_option("--tau", flags.tau,
                                    "Reservoir scaling in (0, 1] (default 0.4 monthly, "
                                    "0.6 quarterly)");
    flags.ic_opt = cmd->add_option("--ic", flags.ic,
                                   "Information criterion: AIC, AICc, BIC or HQC "
                                   "(default AICc monthly, AIC quarterly)")
                       ->check(CLI::IsMember({"AIC", "AICc", "BIC", "HQC"}));
    cmd->add_option("--density", flags.density, "Reservoir connectivity density")
        ->capture_default_str();
    cmd->add_option("--washout-frac", flags.washout_frac, "Washout fraction")
        ->capture_default_str();
    cmd->add_option("--lambda-lo", flags.lambda_lo, "Ridge search lower bound")
        ->capture_default_str();
    cmd->add_option("--lambda-hi", flags.lambda_hi, "Ridge search upper bound")
        ->capture_default_str();
    cmd->add_option("--k-multiplier", flags.k_multiplier,
                    "Lambda candidates per reservoir unit")
        ->capture_default_str();
    cmd->add_option("--reservoir-cap", flags.reservoir_cap, "Maximum reservoir size")
        ->capture_default_str();
    cmd->add_option("--kpss-significance", flags.kpss_significance,
                    "KPSS significance level")
        ->check(CLI::IsMember({0.10, 0.05, 0.025, 0.01}))
        ->capture_default_str();
    cmd->add_option("--max-diff-order", flags.max_diff_order,
                    "Maximum differencing order")
        ->check(CLI::Range(0, 2))
        ->capture_default_str();
}

void write_accuracy_csv(const std::string& path,
                        const std::vector<esn::AccuracyRecord>& records) {
    std::ofstream out(path);
    if (!out) throw esn::DataError("cannot open for writing: " + path);
    out << "series_id,model_id,mase,smape_pct,elapsed_seconds\n";
    for (const auto& r : records) {
        out << r.series_id << ',' << r.model_id << ',';
        if (r.mase.has_value()) out << format_double(*r.mase);
        out << ',' << format_double(r.smape_pct) << ',' << format_double(r.elapsed_seconds)
            << '\n';
    }
}

void write_summary_csv(const std::string& path, const std::vector<esn::ModelSummary>& rows) {
    std::ofstream out(path);
    if (!out) throw esn::DataError("cannot open for writing: " + path);
    out << "model_id,n,n_degenerate,mase_mean,mase_median,smape_mean,smape_median,"
           "runtime_mean,runtime_total\n";
    for (const auto& r : rows) {
        out << r.model_id << ',' << r.n << ',' << r.n_degenerate << ','
            << format_double(r.mase.mean) << ',' << format_double(r.mase.median) << ','
            << format_double(r.smape.mean) << ',' << format_double(r.smape.median) << ','
            << format_double(r.mean_elapsed) << ',' << format_double(r.total_elapsed) << '\n';
    }
}

void write_summary_text(std::ostream& out, const std::vector<esn::ModelSummary>& rows) {
    out << "                     MASE                sMAPE [%]           Run-Time [sec]\n";
    char line[160];
    std::snprintf(line, sizeof(line), "%-10s %9s %9s  %9s %9s  %9s %11s\n", "Model", "Mean",
                  "Median", "Mean", "Median", "Mean", "Total");
    out << line;
    for (const auto& r : rows) {
        std::snprintf(line, sizeof(line), "%-10s %9.3f %9.3f  %9.3f %9.3f  %9.3f %11.3f\n",
                      r.model_id.c_str(), r.mase.mean, r.mase.median, r.smape.mean,
                      r.smape.median, r.mean_elapsed, r.total_elapsed);
        out << line;
    }
    std::size_t degenerate = 0;
    for (const auto& r : rows) degenerate += r.n_degenerate;
    if (degenerate > 0) {
        out << "(" << degenerate
            << " record(s) had a degenerate MASE denominator and are excluded from the "
               "MASE columns)\n";
    }
}

void write_plot_script(const std::string& path) {
    std::ofstream out(path);
    out << R"PY(#!/usr/bin/env python3
"""Plots marginal median MASE per hyperparameter from marginals.csv."""
import csv
import sys
from collections import defaultdict

import matplotlib.pyplot as plt

path = sys.argv[1] if len(sys.argv) > 1 else "marginals.csv"
panels = defaultdict(list)
with open(path) as fh:
    for row in csv.DictReader(fh):
        panels[row["parameter"]].append((row["value"], float(row["median_mase"])))

fig, axes = plt.subplots(1, len(panels), figsize=(4 * len(panels), 3.2))
for ax, (parameter, points) in zip(axes, sorted(panels.items())):
    labels = [p[0] for p in points]
    values = [p[1] for p in points]
    best = min(range(len(values)), key=values.__getitem__)
    ax.plot(range(len(values)), values, "-o", mfc="white")
    ax.plot(best, values[best], "o")
    ax.set_xticks(range(len(labels)), labels, rotation=45)
    ax.set_title(parameter)
    ax.set_ylabel("median MASE")
fig.tight_layout()
fig.savefig("marginals.png", dpi=150)
print("wrote marginals.png")
)PY";
}

int cmd_sample(const std::string& input, const std::string& freq_name, std::size_t n_each,
               std::uint64_t seed, const std::string& out_dir) {
    const auto freq = esn::Frequency::from_name(freq_name);
    const auto all = esn::parse_m4_csv(input, freq);
    const auto pool = esn::filter_by_length(all);
    const auto sampled = esn::sample_disjoint(pool, n_each, seed);

    std::map<std::string, const esn::TimeSeries*> by_id;
    for (const auto& ts : pool) by_id[ts.id] = &ts;
    const auto collect = [&](const std::vector<std::string>& ids) {
        std::vector<esn::TimeSeries> out;
        for (const auto& id : ids) out.push_back(*by_id.at(id));
        return out;
    };

    fs::create_directories(out_dir);
    const auto parameter_path = (fs::path(out_dir) / "parameter.csv").string();
    const auto forecast_path = (fs::path(out_dir) / "forecast.csv").string();
    esn::write_m4_csv(parameter_path, collect(sampled.parameter_ids));
    esn::write_m4_csv(forecast_path, collect(sampled.forecast_ids));

    std::ofstream manifest(fs::path(out_dir) / "manifest.txt");
    char hash_hex[32];
    std::snprintf(hash_hex, sizeof(hash_hex), "%016llx",
                  static_cast<unsigned long long>(esn::pool_hash(pool)));
    manifest << "seed=" << seed << "\n"
             << "frequency=" << freq.name() << "\n"
             << "n_each=" << n_each << "\n"
             << "input_series=" << all.size() << "\n"
             << "pool_size=" << pool.size() << "\n"
             << "pool_hash=" << hash_hex << "\n"
             << "parameter_file=parameter.csv\n"
             << "parameter_count=" << sampled.parameter_ids.size() << "\n"
             << "forecast_file=forecast.csv\n"
             << "forecast_count=" << sampled.forecast_ids.size() << "\n";

    std::cout << "sampled " << n_each << " + " << n_each << " series from a pool of "
              << pool.size() << " into " << out_dir << "\n";
    return 0;
}

int cmd_characterize(const std::string& input, const std::string& freq_name,
                     const std::string& out_path, const std::string& summary_path) {
    const auto freq = esn::Frequency::from_name(freq_name);
    const auto series = esn::parse_m4_csv(input, freq);

    std::ofstream out(out_path);
    if (!out) throw esn::DataError("cannot open for writing: " + out_path);
    out << "series_id,length,trend_strength,seasonal_strength,flags\n";

    std::vector<double> lengths, trends, seasons;
    for (const auto& ts : series) {
        lengths.push_back(static_cast<double>(ts.length()));
        out << ts.id << ',' << ts.length() << ',';
        if (static_cast<int>(ts.length()) < 2 * freq.period + 1) {
            out << ",,too_short\n";
            continue;
        }
        const auto parts = esn::decompose_additive(ts.values, freq.period);
        const auto ft = esn::strength_of_trend(parts);
        const auto fsn = esn::strength_of_seasonality(parts);
        out << format_double(ft.value) << ',' << format_double(fsn.value) << ',';
        std::vector<std::string> flags;
        if (ft.degenerate) flags.push_back("degenerate_trend");
        if (fsn.degenerate) flags.push_back("degenerate_seasonal");
        if (flags.empty()) {
            out << "ok";
        } else {
            for (std::size_t i = 0; i < flags.size(); ++i) {
                out << (i > 0 ? ";" : "") << flags[i];
            }
        }
        out << '\n';
        trends.push_back(ft.value);
        seasons.push_back(fsn.value);
    }

    if (!summary_path.empty()) {
        std::ofstream summary(summary_path);
        const auto emit = [&](const char* name, const std::vector<double>& values) {
            if (values.empty()) return;
            const auto s = esn::describe(values);
            char line[200];
            std::snprintf(line, sizeof(line),
                          "%-8s n=%zu min=%.3f q1=%.3f mean=%.3f median=%.3f q3=%.3f "
                          "max=%.3f std=%.3f\n",
                          name, s.n, s.min, s.q1, s.mean, s.median, s.q3, s.max, s.std_dev);
            summary << line;
        };
        emit("length", lengths);
        emit("trend", trends);
        emit("season", seasons);
    }
    std::cout << "characterized " << series.size() << " series -> " << out_path << "\n";
    return 0;
}

int cmd_forecast(const IoOptions& io, const ConfigFlags& flags, std::uint64_t seed,
                 bool holdout, const std::string& only_id, const std::string& out_path,
                 const std::string& save_model_dir, const std::string& from_model,
                 int horizon_override, bool keep_going) {
    const auto freq = io.frequency();

    std::ofstream out(out_path);
    if (!out) throw esn::DataError("cannot open for writing: " + out_path);
    out << "series_id,step,forecast\n";

    if (!from_model.empty()) {
        const auto model = esn::load_model(from_model);
        const int h = horizon_override > 0 ? horizon_override : freq.horizon;
        const auto result = esn::forecast(model, h);
        for (std::size_t k = 0; k < result.point_forecasts.size(); ++k) {
            out << "model," << k + 1 << ',' << format_double(result.point_forecasts[k])
                << '\n';
        }
        std::cout << "forecast " << h << " steps from " << from_model << " -> " << out_path
                  << "\n";
        return 0;
    }

    if (io.data_path.empty()) throw esn::DataError("forecast needs --data");
    auto series = esn::parse_m4_csv(io.data_path, freq);
    if (!only_id.empty()) {
        std::erase_if(series, [&](const esn::TimeSeries& ts) { return ts.id != only_id; });
        if (series.empty()) throw esn::DataError("series id '" + only_id + "' not found");
    }

    if (!save_model_dir.empty()) fs::create_directories(save_model_dir);

    std::size_t succeeded = 0;
    std::size_t failed = 0;
    for (const auto& ts : series) {
        esn::SplitSeries split;
        if (holdout) {
            split = esn::split_train_test(ts);
        } else {
            split.id = ts.id;
            split.frequency = ts.frequency;
            split.train = ts.values;
        }
        try {
            const auto config = flags.build(esn::task_seed(seed, ts.id, 0));
            const int h = horizon_override > 0 ? horizon_override : freq.horizon;
            esn::ForecastResult result;
            try {
                const auto model = esn::fit(split.train, freq, config);
                result = esn::forecast(model, h);
                if (!save_model_dir.empty()) {
                    esn::save_model(model,
                                    (fs::path(save_model_dir) / (ts.id + ".esn")).string());
                }
            } catch (const esn::ConstantSeriesSignal&) {
                result.point_forecasts.assign(static_cast<std::size_t>(h),
                                              split.train.back());
            }
            for (std::size_t k = 0; k < result.point_forecasts.size(); ++k) {
                out << ts.id << ',' << k + 1 << ','
                    << format_double(result.point_forecasts[k]) << '\n';
            }
            ++succeeded;
        } catch (const std::exception& e) {
            ++failed;
            std::cerr << "series " << ts.id << ": " << e.what() << "\n";
            if (!keep_going) throw;
        }
    }
    std::cout << "forecast " << succeeded << " series";
    if (failed > 0) std::cout << " (" << failed << " failed)";
    std::cout << " -> " << out_path << "\n";
    return succeeded > 0 ? 0 : kExitData;
}

int cmd_benchmark(const IoOptions& io, const ConfigFlags& flags, std::uint64_t seed,
                  const std::string& out_dir) {
    const auto freq = io.frequency();
    const auto dataset = load_split_dataset(io);
    fs::create_directories(out_dir);

    std::vector<esn::AccuracyRecord> records;
    const auto push_record = [&](const std::string& id, const std::string& model,
                                 const std::vector<double>& forecast,
                                 const esn::SplitSeries& split, double elapsed) {
        esn::AccuracyRecord rec;
        rec.series_id = id;
        rec.model_id = model;
        rec.smape_pct = esn::smape(split.test, forecast);
        try {
            rec.mase = esn::mase(split.test, forecast, split.train, freq.period);
        } catch (const esn::DataError&) {
            rec.mase = std::nullopt;
        }
        rec.elapsed_seconds = elapsed;
        records.push_back(std::move(rec));
    };

    std::size_t esn_failures = 0;
    for (const auto& split : dataset) {
        const auto config = flags.build(esn::task_seed(seed, split.id, 0));
        try {
            const auto result = esn::fit_forecast(split, freq, config);
            push_record(split.id, "ESN", result.point_forecasts, split,
                        result.elapsed_seconds);
        } catch (const std::exception& e) {
            ++esn_failures;
            std::cerr << "ESN on " << split.id << ": " << e.what() << "\n";
        }
        for (const auto kind : esn::kAllBenchmarks) {
            const auto start = std::chrono::steady_clock::now();
            try {
                const auto forecast =
                    esn::benchmark_forecast(kind, split.train, freq.period, freq.horizon);
                const double elapsed =
                    std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                        .count();
                push_record(split.id, esn::benchmark_name(kind), forecast, split, elapsed);
            } catch (const std::exception& e) {
                std::cerr << esn::benchmark_name(kind) << " on " << split.id << ": "
                          << e.what() << "\n";
            }
        }
    }
    if (records.empty()) throw esn::DataError("benchmark produced no records");

    const auto summary = esn::aggregate(records);
    write_accuracy_csv((fs::path(out_dir) / "accuracy.csv").string(), records);
    write_summary_csv((fs::path(out_dir) / "summary.csv").string(), summary);
    {
        std::ofstream text(fs::path(out_dir) / "summary.txt");
        write_summary_text(text, summary);
        if (esn_failures > 0) {
            text << "(" << esn_failures << " series failed to fit an ESN)\n";
        }
    }
    write_summary_text(std::cout, summary);
    return 0;
}

std::vector<esn::GridPoint> parse_grid_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw esn::DataError("cannot open grid file: " + path);
    std::vector<double> alphas, rhos, taus;
    std::vector<esn::IcKind> ics;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw esn::DataError("grid file: malformed line '" + line + "'");
        }
        const auto key = line.substr(0, eq);
        std::stringstream values(line.substr(eq + 1));
        std::string cell;
        while (std::getline(values, cell, ',')) {
            if (cell.empty()) continue;
            if (key == "ics") {
                ics.push_back(esn::ic_from_name(cell));
            } else if (key == "alphas") {
                alphas.push_back(std::stod(cell));
            } else if (key == "rhos") {
                rhos.push_back(std::stod(cell));
            } else if (key == "taus") {
                taus.push_back(std::stod(cell));
            } else {
                throw esn::DataError("grid file: unknown key '" + key + "'");
            }
        }
    }
    const auto full = esn::generate_grid();
    if (ics.empty()) ics = {esn::IcKind::Aic, esn::IcKind::Aicc, esn::IcKind::Bic,
                            esn::IcKind::Hqc};
    if (alphas.empty() || rhos.empty() || taus.empty()) {
        std::set<double> a, r, t;
        for (const auto& p : full) {
            a.insert(p.alpha);
            r.insert(p.rho);
            t.insert(p.tau);
        }
        if (alphas.empty()) alphas.assign(a.begin(), a.end());
        if (rhos.empty()) rhos.assign(r.begin(), r.end());
        if (taus.empty()) taus.assign(t.begin(), t.end());
    }
    return esn::make_grid(ics, alphas, rhos, taus);
}

void write_reports(const std::string& out_dir, const std::vector<esn::SweepRecord>& records,
                   const std::vector<esn::GridPoint>& grid, std::size_t top_k) {
    std::size_t excluded = 0;
    const auto ranking = esn::rank_configs(records, grid, top_k, &excluded);
    const auto marginals = esn::marginal_summaries(records, grid);
    esn::write_ranking_csv((fs::path(out_dir) / "ranking.csv").string(), ranking);
    esn::write_marginals_csv((fs::path(out_dir) / "marginals.csv").string(), marginals);
    esn::write_sweep_summary((fs::path(out_dir) / "summary.txt").string(), records, ranking);
    write_plot_script((fs::path(out_dir) / "plot_marginals.py").string());
    if (excluded > 0) {
        std::cerr << "warning: " << excluded
                  << " configuration(s) had no ok records and were excluded from the "
                     "ranking\n";
    }
}

int cmd_sweep(const IoOptions& io, std::uint64_t master_seed, int parallelism,
              const std::string& out_dir, bool resume, const std::string& grid_file,
              std::size_t top_k, const ConfigFlags& flags) {
    const auto dataset = load_split_dataset(io);
    const auto grid = grid_file.empty() ? esn::generate_grid() : parse_grid_file(grid_file);

    esn::SweepOptions options;
    options.master_seed = master_seed;
    options.parallelism = parallelism;
    options.output_dir = out_dir;
    options.resume = resume;
    options.defaults.density = flags.density;
    options.defaults.washout_frac = flags.washout_frac;
    options.defaults.lambda_lo = flags.lambda_lo;
    options.defaults.lambda_hi = flags.lambda_hi;
    options.defaults.k_multiplier = flags.k_multiplier;
    options.defaults.reservoir_cap = flags.reservoir_cap;
    options.defaults.kpss_critical_value = flags.kpss_critical_value();
    options.defaults.max_diff_order = flags.max_diff_order;

    const std::size_t total = dataset.size() * grid.size();
    const std::size_t step = std::max<std::size_t>(1, total / 20);
    options.progress = [step](std::size_t done, std::size_t all) {
        if (done % step == 0 || done == all) {
            std::cerr << "progress: " << done << "/" << all << "\n";
        }
    };

    std::cout << "sweep: " << dataset.size() << " series x " << grid.size()
              << " configurations = " << total << " fits\n";
    const auto records = esn::run_sweep(dataset, grid, options);
    write_reports(out_dir, records, grid, top_k);
    std::cout << "wrote records.csv, ranking.csv, marginals.csv, summary.txt to " << out_dir
              << "\n";
    return 0;
}

int cmd_report(const std::string& records_path, const std::string& grid_file,
               const std::string& out_dir, std::size_t top_k) {
    const auto records = esn::read_records_csv(records_path);
    if (records.empty()) throw esn::DataError("no records in " + records_path);
    const auto grid = grid_file.empty() ? esn::generate_grid() : parse_grid_file(grid_file);
    fs::create_directories(out_dir);
    write_reports(out_dir, records, grid, top_k);
    std::cout << "wrote ranking.csv, marginals.csv, summary.txt to " << out_dir << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Echo state network forecasting engine for monthly and quarterly series"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Key-value config file with [subcommand] sections")
        ->envname("ESN_CONFIG");
    app.allow_config_extras(false);  // unknown config keys are an error

    // sample
    auto* sample = app.add_subcommand("sample", "Draw disjoint parameter/forecast subsets");
    std::string sample_input, sample_freq = "monthly", sample_out = ".";
    std::size_t sample_n = 0;
    std::uint64_t sample_seed = 42;
    sample->add_option("--input", sample_input, "M4-format CSV")->required();
    sample->add_option("--freq", sample_freq)->check(CLI::IsMember({"monthly", "quarterly"}));
    sample->add_option("--n", sample_n, "Series per subset")->required();
    sample->add_option("--seed", sample_seed)->capture_default_str();
    sample->add_option("--out-dir", sample_out)->capture_default_str();

    // characterize
    auto* characterize =
        app.add_subcommand("characterize", "Per-series length and trend/seasonality strength");
    std::string ch_input, ch_freq = "monthly", ch_out = "strengths.csv", ch_summary;
    characterize->add_option("--input", ch_input)->required();
    characterize->add_option("--freq", ch_freq)
        ->check(CLI::IsMember({"monthly", "quarterly"}));
    characterize->add_option("--out", ch_out)->capture_default_str();
    characterize->add_option("--summary", ch_summary, "Optional distribution summary file");

    // forecast
    auto* forecast = app.add_subcommand("forecast", "Fit and forecast with one configuration");
    IoOptions fc_io;
    ConfigFlags fc_flags;
    std::uint64_t fc_seed = 42;
    bool fc_holdout = false, fc_keep_going = false;
    std::string fc_id, fc_out = "forecasts.csv", fc_save_dir, fc_from_model;
    int fc_horizon = 0;
    add_io_options(forecast, fc_io, false);
    add_config_flags(forecast, fc_flags);
    forecast->add_option("--seed", fc_seed)->capture_default_str();
    forecast->add_flag("--holdout", fc_holdout,
                       "Split off the last horizon observations before fitting");
    forecast->add_option("--id", fc_id, "Forecast a single series");
    forecast->add_option("--out", fc_out)->capture_default_str();
    forecast->add_option("--save-model", fc_save_dir, "Directory for fitted model files");
    forecast->add_option("--from-model", fc_from_model, "Reload a saved model and forecast");
    forecast->add_option("--horizon", fc_horizon, "Override the frequency horizon");
    forecast->add_flag("--keep-going", fc_keep_going,
                       "Log per-series failures instead of aborting");

    // benchmark
    auto* benchmark =
        app.add_subcommand("benchmark", "Compare the ESN against the simple methods");
    IoOptions bm_io;
    ConfigFlags bm_flags;
    std::uint64_t bm_seed = 42;
    std::string bm_out = "benchmark_out";
    add_io_options(benchmark, bm_io, true);
    add_config_flags(benchmark, bm_flags);
    benchmark->add_option("--seed", bm_seed)->capture_default_str();
    benchmark->add_option("--out-dir", bm_out)->capture_default_str();

    // sweep
    auto* sweep = app.add_subcommand("sweep", "Run the hyperparameter grid study");
    IoOptions sw_io;
    ConfigFlags sw_flags;
    std::uint64_t sw_seed = 42;
    int sw_parallelism = static_cast<int>(std::thread::hardware_concurrency());
    std::string sw_out = "sweep_out", sw_grid;
    bool sw_resume = false;
    std::size_t sw_top_k = 30;
    add_io_options(sweep, sw_io, true);
    add_config_flags(sweep, sw_flags);
    sweep->add_option("--seed", sw_seed, "Master seed")->capture_default_str();
    sweep->add_option("--parallelism", sw_parallelism)->capture_default_str();
    sweep->add_option("--out-dir", sw_out)->capture_default_str();
    sweep->add_flag("--resume", sw_resume, "Skip pairs already in the results store");
    sweep->add_option("--grid", sw_grid, "Grid override file (alphas=/rhos=/taus=/ics=)");
    sweep->add_option("--top-k", sw_top_k)->capture_default_str();

    // report
    auto* report = app.add_subcommand("report", "Regenerate tables from a results store");
    std::string rp_records = "sweep_out/records.csv", rp_out = "sweep_out", rp_grid;
    std::size_t rp_top_k = 30;
    report->add_option("--records", rp_records)->capture_default_str();
    report->add_option("--out-dir", rp_out)->capture_default_str();
    report->add_option("--grid", rp_grid, "Grid override used for the sweep, if any");
    report->add_option("--top-k", rp_top_k)->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (sample->parsed()) {
            return cmd_sample(sample_input, sample_freq, sample_n, sample_seed, sample_out);
        }
        if (characterize->parsed()) {
            return cmd_characterize(ch_input, ch_freq, ch_out, ch_summary);
        }
        if (forecast->parsed()) {
            fc_flags.apply_frequency_defaults(fc_io.frequency());
            return cmd_forecast(fc_io, fc_flags, fc_seed, fc_holdout, fc_id, fc_out,
                                fc_save_dir, fc_from_model, fc_horizon, fc_keep_going);
        }
        if (benchmark->parsed()) {
            bm_flags.apply_frequency_defaults(bm_io.frequency());
            return cmd_benchmark(bm_io, bm_flags, bm_seed, bm_out);
        }
        if (sweep->parsed()) {
            return cmd_sweep(sw_io, sw_seed, sw_parallelism, sw_out, sw_resume, sw_grid,
                             sw_top_k, sw_flags);
        }
        if (report->parsed()) {
            return cmd_report(rp_records, rp_grid, rp_out, rp_top_k);
        }
    } catch (const esn::DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kExitData;
    } catch (const esn::NumericError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumeric;
    }
    return 0;
}
