#include "esn/forecaster.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "esn/errors.hpp"
#include "esn/rng.hpp"

namespace esn {

namespace {

std::string format_double(double v) {
    char buf[32];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

double parse_double_strict(const std::string& s, const std::string& what) {
    double v;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        throw DataError("cannot parse " + what + " from '" + s + "'");
    }
    return v;
}

void check_range(bool ok, const std::string& message) {
    if (!ok) throw DataError("config: " + message);
}

}  // namespace

void EsnConfig::validate() const {
    check_range(alpha > 0.0 && alpha <= 1.0, "alpha must lie in (0, 1]");
    check_range(rho > 0.0, "rho must be positive");
    check_range(tau > 0.0 && tau <= 1.0, "tau must lie in (0, 1]");
    check_range(density > 0.0 && density <= 1.0, "density must lie in (0, 1]");
    check_range(washout_frac >= 0.0 && washout_frac < 1.0, "washout_frac must lie in [0, 1)");
    check_range(lambda_lo > 0.0, "lambda_lo must be positive");
    check_range(lambda_lo < lambda_hi, "lambda range must satisfy lo < hi");
    check_range(k_multiplier >= 1, "k_multiplier must be >= 1");
    check_range(reservoir_cap >= 1, "reservoir_cap must be >= 1");
    check_range(kpss_critical_value > 0.0, "kpss_critical_value must be positive");
    check_range(max_diff_order >= 0 && max_diff_order <= 2,
                "max_diff_order must lie in [0, 2]");
}

std::string EsnConfig::to_kv() const {
    std::ostringstream out;
    out << "alpha=" << format_double(alpha) << "\n"
        << "rho=" << format_double(rho) << "\n"
        << "tau=" << format_double(tau) << "\n"
        << "ic=" << ic_name(ic_kind) << "\n"
        << "density=" << format_double(density) << "\n"
        << "washout_frac=" << format_double(washout_frac) << "\n"
        << "lambda_lo=" << format_double(lambda_lo) << "\n"
        << "lambda_hi=" << format_double(lambda_hi) << "\n"
        << "k_multiplier=" << k_multiplier << "\n"
        << "reservoir_cap=" << reservoir_cap << "\n"
        << "kpss_critical_value=" << format_double(kpss_critical_value) << "\n"
        << "max_diff_order=" << max_diff_order << "\n"
        << "seed=" << seed << "\n";
    return out.str();
}

EsnConfig EsnConfig::from_kv(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw DataError("config: malformed line '" + line + "'");
        kv[line.substr(0, eq)] = line.substr(eq + 1);
    }
    const auto need = [&](const std::string& key) {
        const auto it = kv.find(key);
        if (it == kv.end()) throw DataError("config: missing key '" + key + "'");
        return it->second;
    };
    EsnConfig c;
    c.alpha = parse_double_strict(need("alpha"), "alpha");
    c.rho = parse_double_strict(need("rho"), "rho");
    c.tau = parse_double_strict(need("tau"), "tau");
    c.ic_kind = ic_from_name(need("ic"));
    c.density = parse_double_strict(need("density"), "density");
    c.washout_frac = parse_double_strict(need("washout_frac"), "washout_frac");
    c.lambda_lo = parse_double_strict(need("lambda_lo"), "lambda_lo");
    c.lambda_hi = parse_double_strict(need("lambda_hi"), "lambda_hi");
    c.k_multiplier = static_cast<int>(parse_double_strict(need("k_multiplier"), "k_multiplier"));
    c.reservoir_cap = static_cast<int>(parse_double_strict(need("reservoir_cap"), "reservoir_cap"));
    c.kpss_critical_value = parse_double_strict(need("kpss_critical_value"), "kpss_critical_value");
    c.max_diff_order = static_cast<int>(parse_double_strict(need("max_diff_order"), "max_diff_order"));
    c.seed = std::stoull(need("seed"));
    c.validate();
    return c;
}

TrainedEsn fit(const std::vector<double>& train, const Frequency& frequency,
               const EsnConfig& config) {
    config.validate();
    const auto min_train = static_cast<std::size_t>(std::max(2 * frequency.period, 12));
    if (train.size() < min_train) {
        throw DataError("fit: training series of length " + std::to_string(train.size()) +
                        " is too short (need >= " + std::to_string(min_train) + ")");
    }

    auto [scaled, record] =
        forward_transform(train, config.kpss_critical_value, config.max_diff_order);
    if (record.constant_series) throw ConstantSeriesSignal();

    // One-step-ahead teacher forcing: the input at time t is z_{t-1}, so the
    // reservoir is driven by z_1..z_{Tz-1} and the targets are z_2..z_Tz.
    const std::size_t t_z = scaled.size();
    std::vector<double> input(scaled.begin(), scaled.end() - 1);
    std::vector<double> targets(scaled.begin() + 1, scaled.end());

    const int n = reservoir_size(t_z, config.tau, config.reservoir_cap);
    const auto weights = generate_weights(n, config.rho, sub_seed(config.seed, 1),
                                          config.density);
    const auto states = run_reservoir(input, weights, config.alpha, config.washout_frac);

    std::vector<double> y_reg(targets.begin() + static_cast<std::ptrdiff_t>(states.washout),
                              targets.end());

    LambdaSearchSpec spec;
    spec.lo = config.lambda_lo;
    spec.hi = config.lambda_hi;
    spec.num_candidates = config.k_multiplier * n;
    spec.seed = sub_seed(config.seed, 2);

    TrainedEsn model;
    model.weights = weights;
    model.readout = select_lambda(states.states, y_reg, spec, config.ic_kind);
    model.transform = record;
    model.x_final = states.x_final;
    model.last_scaled_value = scaled.back();
    model.train_tail.assign(train.end() - record.diff_order, train.end());
    model.config = config;
    return model;
}

ForecastResult forecast(const TrainedEsn& model, int horizon) {
    if (horizon < 1) throw DataError("forecast: horizon must be >= 1");
    const auto n = static_cast<std::size_t>(model.weights.size);
    if (model.readout.w_out.size() != n + 1) {
        throw DataError("forecast: readout dimension does not match the reservoir");
    }

    std::vector<double> state = model.x_final;
    std::vector<double> next(n);
    double u = model.last_scaled_value;
    std::vector<double> scaled_path(static_cast<std::size_t>(horizon));
    const double alpha = model.config.alpha;

    for (int k = 1; k <= horizon; ++k) {
        for (std::size_t i = 0; i < n; ++i) {
            double acc = model.weights.w_in(i, 0) * u;
            for (std::size_t j = 0; j < n; ++j) acc += model.weights.w(i, j) * state[j];
            next[i] = (1.0 - alpha) * state[i] + alpha * std::tanh(acc);
        }
        state.swap(next);
        double prediction = model.readout.w_out[0];
        for (std::size_t i = 0; i < n; ++i) prediction += model.readout.w_out[i + 1] * state[i];
        if (!std::isfinite(prediction)) {
            throw NumericError("forecast: non-finite prediction at step " + std::to_string(k));
        }
        scaled_path[static_cast<std::size_t>(k - 1)] = prediction;
        u = prediction;
    }

    ForecastResult result;
    result.point_forecasts = inverse_transform(scaled_path, model.transform, model.train_tail);
    for (std::size_t i = 0; i < result.point_forecasts.size(); ++i) {
        if (!std::isfinite(result.point_forecasts[i])) {
            throw NumericError("forecast: non-finite value at step " + std::to_string(i + 1));
        }
    }
    result.config = model.config;
    return result;
}

ForecastResult fit_forecast(const SplitSeries& series, const Frequency& frequency,
                            const EsnConfig& config) {
    const auto start = std::chrono::steady_clock::now();
    ForecastResult result;
    try {
        const auto model = fit(series.train, frequency, config);
        result = forecast(model, frequency.horizon);
    } catch (const ConstantSeriesSignal&) {
        result.point_forecasts.assign(static_cast<std::size_t>(frequency.horizon),
                                      series.train.back());
        result.config = config;
    }
    const auto stop = std::chrono::steady_clock::now();
    result.series_id = series.id;
    result.elapsed_seconds = std::chrono::duration<double>(stop - start).count();
    return result;
}

namespace {

void write_vector(std::ostream& out, const std::string& name, const std::vector<double>& v) {
    out << name << ' ' << v.size() << '\n';
    for (std::size_t i = 0; i < v.size(); ++i) {
        out << format_double(v[i]) << (i + 1 == v.size() ? '\n' : ' ');
    }
    if (v.empty()) out << '\n';
}

void write_matrix(std::ostream& out, const std::string& name, const Matrix& m) {
    out << name << ' ' << m.rows() << ' ' << m.cols() << '\n';
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            out << format_double(m(i, j)) << (j + 1 == m.cols() ? '\n' : ' ');
        }
    }
}

std::vector<double> read_vector(std::istream& in, const std::string& expected) {
    std::string name;
    std::size_t n;
    if (!(in >> name >> n) || name != expected) {
        throw DataError("model file: expected vector block '" + expected + "'");
    }
    std::vector<double> v(n);
    for (auto& x : v) {
        if (!(in >> x)) throw DataError("model file: truncated block '" + expected + "'");
    }
    return v;
}

Matrix read_matrix(std::istream& in, const std::string& expected) {
    std::string name;
    std::size_t rows, cols;
    if (!(in >> name >> rows >> cols) || name != expected) {
        throw DataError("model file: expected matrix block '" + expected + "'");
    }
    Matrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t j = 0; j < cols; ++j) {
            if (!(in >> m(i, j))) {
                throw DataError("model file: truncated block '" + expected + "'");
            }
        }
    }
    return m;
}

}  // namespace

void save_model(const TrainedEsn& model, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot open model file for writing: " + path);
    out << "esn-model v1\n";
    out << "[config]\n" << model.config.to_kv();
    out << "[transform]\n";
    out << "diff_order=" << model.transform.diff_order << "\n";
    out << "scale_min=" << format_double(model.transform.scale_min) << "\n";
    out << "scale_max=" << format_double(model.transform.scale_max) << "\n";
    out << "constant=" << (model.transform.constant_series ? 1 : 0) << "\n";
    out << "[readout]\n";
    out << "lambda=" << format_double(model.readout.lambda) << "\n";
    out << "df=" << format_double(model.readout.df) << "\n";
    out << "rss=" << format_double(model.readout.rss) << "\n";
    out << "ic_value=" << format_double(model.readout.ic_value) << "\n";
    out << "ic=" << ic_name(model.readout.ic_kind) << "\n";
    out << "last_scaled_value=" << format_double(model.last_scaled_value) << "\n";
    out << "[blocks]\n";
    write_vector(out, "initial_values", model.transform.initial_values);
    write_vector(out, "train_tail", model.train_tail);
    write_vector(out, "w_out", model.readout.w_out);
    write_vector(out, "x_final", model.x_final);
    write_matrix(out, "w_in", model.weights.w_in);
    write_matrix(out, "w", model.weights.w);
    out << "rho " << format_double(model.weights.rho) << "\n";
    out << "weights_seed " << model.weights.seed << "\n";
    if (!out) throw DataError("failed writing model file: " + path);
}

TrainedEsn load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open model file: " + path);
    std::string line;
    std::getline(in, line);
    if (line != "esn-model v1") {
        throw DataError("model file " + path + ": unsupported format '" + line + "'");
    }

    std::map<std::string, std::string> kv;
    std::string config_text;
    std::string section;
    while (std::getline(in, line)) {
        if (line == "[blocks]") break;
        if (line.empty()) continue;
        if (line.front() == '[') {
            section = line;
            continue;
        }
        if (section == "[config]") {
            config_text += line + "\n";
        } else {
            const auto eq = line.find('=');
            if (eq == std::string::npos) {
                throw DataError("model file " + path + ": malformed line '" + line + "'");
            }
            kv[line.substr(0, eq)] = line.substr(eq + 1);
        }
    }

    const auto need = [&](const std::string& key) {
        const auto it = kv.find(key);
        if (it == kv.end()) throw DataError("model file " + path + ": missing key " + key);
        return it->second;
    };

    TrainedEsn model;
    model.config = EsnConfig::from_kv(config_text);
    model.transform.diff_order = std::stoi(need("diff_order"));
    model.transform.scale_min = parse_double_strict(need("scale_min"), "scale_min");
    model.transform.scale_max = parse_double_strict(need("scale_max"), "scale_max");
    model.transform.constant_series = need("constant") == "1";
    model.readout.lambda = parse_double_strict(need("lambda"), "lambda");
    model.readout.df = parse_double_strict(need("df"), "df");
    model.readout.rss = parse_double_strict(need("rss"), "rss");
    model.readout.ic_value = parse_double_strict(need("ic_value"), "ic_value");
    model.readout.ic_kind = ic_from_name(need("ic"));
    model.last_scaled_value = parse_double_strict(need("last_scaled_value"), "last_scaled_value");

    model.transform.initial_values = read_vector(in, "initial_values");
    model.train_tail = read_vector(in, "train_tail");
    model.readout.w_out = read_vector(in, "w_out");
    model.x_final = read_vector(in, "x_final");
    model.weights.w_in = read_matrix(in, "w_in");
    model.weights.w = read_matrix(in, "w");
    model.weights.size = static_cast<int>(model.weights.w.rows());

    std::string name;
    if (!(in >> name >> model.weights.rho) || name != "rho") {
        throw DataError("model file " + path + ": missing rho");
    }
    if (!(in >> name >> model.weights.seed) || name != "weights_seed") {
        throw DataError("model file " + path + ": missing weights_seed");
    }

    if (model.readout.w_out.size() != model.weights.w.rows() + 1 ||
        model.x_final.size() != model.weights.w.rows() ||
        model.train_tail.size() != static_cast<std::size_t>(model.transform.diff_order)) {
        throw DataError("model file " + path + ": inconsistent dimensions");
    }
    return model;
}

}  // namespace esn
