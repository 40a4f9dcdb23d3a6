#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "esn/benchmarks.hpp"
#include "esn/errors.hpp"
#include "esn/forecaster.hpp"
#include "esn/metrics.hpp"
#include "esn/preprocess.hpp"
#include "esn/readout.hpp"
#include "esn/reservoir.hpp"
#include "esn/rng.hpp"
#include "esn/sweep.hpp"
#include "esn/time_series.hpp"

namespace py = pybind11;

namespace {

esn::Matrix to_matrix(const std::vector<std::vector<double>>& rows) {
    const std::size_t r = rows.size();
    const std::size_t c = r > 0 ? rows[0].size() : 0;
    esn::Matrix m(r, c);
    for (std::size_t i = 0; i < r; ++i) {
        if (rows[i].size() != c) throw esn::DataError("ragged matrix rows");
        for (std::size_t j = 0; j < c; ++j) m(i, j) = rows[i][j];
    }
    return m;
}

std::vector<std::vector<double>> from_matrix(const esn::Matrix& m) {
    std::vector<std::vector<double>> rows(m.rows(), std::vector<double>(m.cols()));
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) rows[i][j] = m(i, j);
    return rows;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Echo state network forecasting engine";

    py::register_exception<esn::DataError>(m, "DataError", PyExc_ValueError);
    py::register_exception<esn::NumericError>(m, "NumericError", PyExc_ArithmeticError);
    py::register_exception<esn::ConstantSeriesSignal>(m, "ConstantSeriesError",
                                                      PyExc_ValueError);

    // data
    py::class_<esn::Frequency>(m, "Frequency")
        .def_static("monthly", &esn::Frequency::monthly)
        .def_static("quarterly", &esn::Frequency::quarterly)
        .def_static("from_name", &esn::Frequency::from_name)
        .def_property_readonly("name", [](const esn::Frequency& f) { return f.name(); })
        .def_readonly("period", &esn::Frequency::period)
        .def_readonly("horizon", &esn::Frequency::horizon)
        .def_readonly("max_length", &esn::Frequency::max_length)
        .def("min_length", &esn::Frequency::min_length);

    py::class_<esn::TimeSeries>(m, "TimeSeries")
        .def(py::init([](const std::string& id, const esn::Frequency& freq,
                         std::vector<double> values) {
                 return esn::TimeSeries{id, freq, std::move(values)};
             }),
             py::arg("id"), py::arg("frequency"), py::arg("values"))
        .def_readwrite("id", &esn::TimeSeries::id)
        .def_readwrite("frequency", &esn::TimeSeries::frequency)
        .def_readwrite("values", &esn::TimeSeries::values)
        .def("__len__", &esn::TimeSeries::length);

    py::class_<esn::SplitSeries>(m, "SplitSeries")
        .def_readonly("id", &esn::SplitSeries::id)
        .def_readonly("frequency", &esn::SplitSeries::frequency)
        .def_readonly("train", &esn::SplitSeries::train)
        .def_readonly("test", &esn::SplitSeries::test);

    py::class_<esn::SampledDatasets>(m, "SampledDatasets")
        .def_readonly("parameter_ids", &esn::SampledDatasets::parameter_ids)
        .def_readonly("forecast_ids", &esn::SampledDatasets::forecast_ids)
        .def_readonly("seed", &esn::SampledDatasets::seed);

    m.def("parse_m4_csv",
          py::overload_cast<const std::string&, const esn::Frequency&>(&esn::parse_m4_csv),
          py::arg("path"), py::arg("frequency"));
    m.def("write_m4_csv",
          py::overload_cast<const std::string&, const std::vector<esn::TimeSeries>&, bool>(
              &esn::write_m4_csv),
          py::arg("path"), py::arg("series"), py::arg("header") = true);
    m.def("filter_by_length", &esn::filter_by_length);
    m.def("split_train_test", &esn::split_train_test);
    m.def("sample_disjoint", &esn::sample_disjoint, py::arg("pool"), py::arg("n_each"),
          py::arg("seed"));

    // preprocess
    py::class_<esn::KpssResult>(m, "KpssResult")
        .def_readonly("statistic", &esn::KpssResult::statistic)
        .def_readonly("lag_truncation", &esn::KpssResult::lag_truncation)
        .def_readonly("critical_value_5pct", &esn::KpssResult::critical_value_5pct)
        .def_readonly("reject_stationarity", &esn::KpssResult::reject_stationarity);

    py::class_<esn::TransformRecord>(m, "TransformRecord")
        .def_readonly("diff_order", &esn::TransformRecord::diff_order)
        .def_readonly("initial_values", &esn::TransformRecord::initial_values)
        .def_readonly("scale_min", &esn::TransformRecord::scale_min)
        .def_readonly("scale_max", &esn::TransformRecord::scale_max)
        .def_readonly("constant_series", &esn::TransformRecord::constant_series);

    m.def("kpss_test", &esn::kpss_test, py::arg("y"), py::arg("critical_value") = 0.463);
    m.def("apply_differencing", &esn::apply_differencing, py::arg("y"),
          py::arg("critical_value") = 0.463, py::arg("max_order") = 2);
    m.def("forward_transform", &esn::forward_transform, py::arg("y"),
          py::arg("critical_value") = 0.463, py::arg("max_order") = 2);
    m.def("inverse_transform", &esn::inverse_transform, py::arg("z"), py::arg("record"),
          py::arg("anchor"));

    // reservoir
    py::class_<esn::ReservoirWeights>(m, "ReservoirWeights")
        .def_readonly("size", &esn::ReservoirWeights::size)
        .def_readonly("rho", &esn::ReservoirWeights::rho)
        .def_readonly("seed", &esn::ReservoirWeights::seed)
        .def_property_readonly("w",
                               [](const esn::ReservoirWeights& w) { return from_matrix(w.w); })
        .def_property_readonly(
            "w_in", [](const esn::ReservoirWeights& w) { return from_matrix(w.w_in); });

    m.def("reservoir_size", &esn::reservoir_size, py::arg("sample_size"), py::arg("tau"),
          py::arg("cap") = 200);
    m.def("generate_weights", &esn::generate_weights, py::arg("n"), py::arg("rho"),
          py::arg("seed"), py::arg("density") = 0.5);
    m.def(
        "spectral_radius",
        [](const std::vector<std::vector<double>>& rows) {
            return esn::spectral_radius(to_matrix(rows));
        },
        py::arg("matrix"));
    m.def(
        "run_reservoir",
        [](const std::vector<double>& input, const esn::ReservoirWeights& weights,
           double alpha, double washout_frac, std::optional<std::vector<double>> x0) {
            const auto states = esn::run_reservoir(input, weights, alpha, washout_frac,
                                                   x0 ? &*x0 : nullptr);
            return py::make_tuple(from_matrix(states.states), states.washout,
                                  states.x_final);
        },
        py::arg("input"), py::arg("weights"), py::arg("alpha"),
        py::arg("washout_frac") = 0.05, py::arg("x0") = std::nullopt,
        "Returns (design_matrix, washout, x_final)");

    // readout
    py::enum_<esn::IcKind>(m, "IcKind")
        .value("AIC", esn::IcKind::Aic)
        .value("AICc", esn::IcKind::Aicc)
        .value("BIC", esn::IcKind::Bic)
        .value("HQC", esn::IcKind::Hqc);

    py::class_<esn::RidgeFit>(m, "RidgeFit")
        .def_readonly("w_out", &esn::RidgeFit::w_out)
        .def_readonly("lambda_", &esn::RidgeFit::lambda)
        .def_readonly("df", &esn::RidgeFit::df)
        .def_readonly("rss", &esn::RidgeFit::rss)
        .def_readonly("ic_value", &esn::RidgeFit::ic_value)
        .def_readonly("ic_kind", &esn::RidgeFit::ic_kind);

    m.def(
        "ridge_solve",
        [](const std::vector<std::vector<double>>& x, const std::vector<double>& y,
           double lambda) { return esn::ridge_solve(to_matrix(x), y, lambda); },
        py::arg("x"), py::arg("y"), py::arg("lambda_"));
    m.def(
        "effective_dof",
        [](const std::vector<std::vector<double>>& x, double lambda) {
            return esn::effective_dof(to_matrix(x), lambda);
        },
        py::arg("x"), py::arg("lambda_"));
    m.def("information_criterion", &esn::information_criterion, py::arg("rss"),
          py::arg("t_eff"), py::arg("df"), py::arg("kind"));
    m.def(
        "select_lambda",
        [](const std::vector<std::vector<double>>& x, const std::vector<double>& y,
           double lo, double hi, int num_candidates, std::uint64_t seed, esn::IcKind kind) {
            esn::LambdaSearchSpec spec;
            spec.lo = lo;
            spec.hi = hi;
            spec.num_candidates = num_candidates;
            spec.seed = seed;
            return esn::select_lambda(to_matrix(x), y, spec, kind);
        },
        py::arg("x"), py::arg("y"), py::arg("lo"), py::arg("hi"), py::arg("num_candidates"),
        py::arg("seed"), py::arg("kind"));

    // forecaster
    py::class_<esn::EsnConfig>(m, "EsnConfig")
        .def(py::init<>())
        .def_readwrite("alpha", &esn::EsnConfig::alpha)
        .def_readwrite("rho", &esn::EsnConfig::rho)
        .def_readwrite("tau", &esn::EsnConfig::tau)
        .def_readwrite("ic_kind", &esn::EsnConfig::ic_kind)
        .def_readwrite("density", &esn::EsnConfig::density)
        .def_readwrite("washout_frac", &esn::EsnConfig::washout_frac)
        .def_readwrite("lambda_lo", &esn::EsnConfig::lambda_lo)
        .def_readwrite("lambda_hi", &esn::EsnConfig::lambda_hi)
        .def_readwrite("k_multiplier", &esn::EsnConfig::k_multiplier)
        .def_readwrite("reservoir_cap", &esn::EsnConfig::reservoir_cap)
        .def_readwrite("kpss_critical_value", &esn::EsnConfig::kpss_critical_value)
        .def_readwrite("max_diff_order", &esn::EsnConfig::max_diff_order)
        .def_readwrite("seed", &esn::EsnConfig::seed)
        .def("validate", &esn::EsnConfig::validate)
        .def("to_kv", &esn::EsnConfig::to_kv)
        .def_static("from_kv", &esn::EsnConfig::from_kv);

    py::class_<esn::TrainedEsn>(m, "TrainedEsn")
        .def_readonly("weights", &esn::TrainedEsn::weights)
        .def_readonly("readout", &esn::TrainedEsn::readout)
        .def_readonly("transform", &esn::TrainedEsn::transform)
        .def_readonly("x_final", &esn::TrainedEsn::x_final)
        .def_readonly("last_scaled_value", &esn::TrainedEsn::last_scaled_value)
        .def_readonly("train_tail", &esn::TrainedEsn::train_tail)
        .def_readonly("config", &esn::TrainedEsn::config);

    py::class_<esn::ForecastResult>(m, "ForecastResult")
        .def_readonly("series_id", &esn::ForecastResult::series_id)
        .def_readonly("point_forecasts", &esn::ForecastResult::point_forecasts)
        .def_readonly("elapsed_seconds", &esn::ForecastResult::elapsed_seconds)
        .def_readonly("config", &esn::ForecastResult::config);

    m.def("fit", &esn::fit, py::arg("train"), py::arg("frequency"), py::arg("config"));
    m.def("forecast", &esn::forecast, py::arg("model"), py::arg("horizon"));
    m.def(
        "fit_forecast",
        [](const esn::SplitSeries& series, const esn::Frequency& freq,
           const esn::EsnConfig& config) {
            py::gil_scoped_release release;
            return esn::fit_forecast(series, freq, config);
        },
        py::arg("series"), py::arg("frequency"), py::arg("config"));
    m.def("save_model", &esn::save_model, py::arg("model"), py::arg("path"));
    m.def("load_model", &esn::load_model, py::arg("path"));

    // benchmarks
    py::enum_<esn::BenchmarkKind>(m, "BenchmarkKind")
        .value("NAIVE", esn::BenchmarkKind::Naive)
        .value("DRIFT", esn::BenchmarkKind::Drift)
        .value("SNAIVE", esn::BenchmarkKind::SeasonalNaive)
        .value("MEAN", esn::BenchmarkKind::Mean)
        .value("THETA", esn::BenchmarkKind::Theta);
    m.def("benchmark_forecast", &esn::benchmark_forecast, py::arg("kind"), py::arg("train"),
          py::arg("period"), py::arg("horizon"));

    // metrics
    m.def("smape", &esn::smape, py::arg("actual"), py::arg("forecast"));
    m.def("mase", &esn::mase, py::arg("actual"), py::arg("forecast"), py::arg("train"),
          py::arg("period"));
    m.def(
        "decompose_additive",
        [](const std::vector<double>& y, int period) {
            const auto parts = esn::decompose_additive(y, period);
            return py::make_tuple(parts.trend, parts.seasonal, parts.remainder);
        },
        py::arg("y"), py::arg("period"), "Returns (trend, seasonal, remainder)");
    m.def(
        "strength_of_trend",
        [](const std::vector<double>& y, int period) {
            const auto s = esn::strength_of_trend(esn::decompose_additive(y, period));
            return py::make_tuple(s.value, s.degenerate);
        },
        py::arg("y"), py::arg("period"), "Returns (value, degenerate)");
    m.def(
        "strength_of_seasonality",
        [](const std::vector<double>& y, int period) {
            const auto s = esn::strength_of_seasonality(esn::decompose_additive(y, period));
            return py::make_tuple(s.value, s.degenerate);
        },
        py::arg("y"), py::arg("period"), "Returns (value, degenerate)");

    // sweep
    py::class_<esn::GridPoint>(m, "GridPoint")
        .def_readonly("config_index", &esn::GridPoint::config_index)
        .def_readonly("ic", &esn::GridPoint::ic)
        .def_readonly("alpha", &esn::GridPoint::alpha)
        .def_readonly("rho", &esn::GridPoint::rho)
        .def_readonly("tau", &esn::GridPoint::tau);

    py::enum_<esn::SweepStatus>(m, "SweepStatus")
        .value("OK", esn::SweepStatus::Ok)
        .value("DEGENERATE", esn::SweepStatus::Degenerate)
        .value("FAILED", esn::SweepStatus::Failed);

    py::class_<esn::SweepRecord>(m, "SweepRecord")
        .def_readonly("series_id", &esn::SweepRecord::series_id)
        .def_readonly("config_index", &esn::SweepRecord::config_index)
        .def_readonly("mase", &esn::SweepRecord::mase)
        .def_readonly("smape_pct", &esn::SweepRecord::smape_pct)
        .def_readonly("elapsed_seconds", &esn::SweepRecord::elapsed_seconds)
        .def_readonly("seed", &esn::SweepRecord::seed)
        .def_readonly("status", &esn::SweepRecord::status);

    m.def("generate_grid", &esn::generate_grid);
    m.def(
        "run_sweep",
        [](const std::vector<esn::SplitSeries>& dataset,
           const std::vector<esn::GridPoint>& grid, std::uint64_t master_seed,
           int parallelism, const std::string& output_dir, bool resume) {
            esn::SweepOptions options;
            options.master_seed = master_seed;
            options.parallelism = parallelism;
            options.output_dir = output_dir;
            options.resume = resume;
            py::gil_scoped_release release;
            return esn::run_sweep(dataset, grid, options);
        },
        py::arg("dataset"), py::arg("grid"), py::arg("master_seed") = 42,
        py::arg("parallelism") = 1, py::arg("output_dir") = std::string(),
        py::arg("resume") = false);
    m.def("task_seed", &esn::task_seed, py::arg("master_seed"), py::arg("series_id"),
          py::arg("config_index"));

#ifdef ESN_VERSION
    m.attr("__version__") = ESN_VERSION;
#else
    m.attr("__version__") = "0.1.0";
#endif
}
