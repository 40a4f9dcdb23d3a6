#include "esn/reservoir.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "esn/errors.hpp"
#include "esn/rng.hpp"

namespace esn {

int reservoir_size(std::size_t sample_size, double tau, int cap) {
    if (tau <= 0.0 || tau > 1.0) {
        throw DataError("reservoir_size: tau must lie in (0, 1], got " + std::to_string(tau));
    }
    const int n = static_cast<int>(std::floor(tau * static_cast<double>(sample_size)));
    if (n < 1) {
        throw DataError("reservoir_size: floor(tau * T) = 0 for T = " +
                        std::to_string(sample_size) + ", tau = " + std::to_string(tau) +
                        "; series too short for this tau");
    }
    return std::min(n, cap);
}

Matrix rescale_to_spectral_radius(const Matrix& w0, double rho) {
    const double radius = spectral_radius(w0);
    if (radius < 1e-12) {
        throw NumericError("rescale_to_spectral_radius: spectral radius below 1e-12");
    }
    Matrix w = w0;
    const double factor = rho / radius;
    for (auto& v : w.data()) v *= factor;
    return w;
}

ReservoirWeights generate_weights(int n, double rho, std::uint64_t seed, double density) {
    if (n < 1) throw DataError("generate_weights: reservoir size must be >= 1");
    if (rho <= 0.0) throw DataError("generate_weights: rho must be positive");

    ReservoirWeights weights;
    weights.size = n;
    weights.rho = rho;
    weights.seed = seed;

    const auto un = static_cast<std::size_t>(n);
    for (int attempt = 0; attempt < 5; ++attempt) {
        Rng rng(sub_seed(seed, static_cast<std::uint64_t>(attempt)));

        Matrix w_in(un, 1);
        for (std::size_t i = 0; i < un; ++i) w_in(i, 0) = rng.uniform01() - 0.5;

        // Draw value first, then the keep/zero mask, row-major.
        Matrix w0(un, un);
        for (std::size_t i = 0; i < un; ++i) {
            for (std::size_t j = 0; j < un; ++j) {
                const double value = rng.uniform01() - 0.5;
                const bool keep = rng.uniform01() < density;
                w0(i, j) = keep ? value : 0.0;
            }
        }

        try {
            weights.w = rescale_to_spectral_radius(w0, rho);
        } catch (const NumericError&) {
            continue;  // pathological mask, retry with the next sub-seed
        }
        weights.w_in = std::move(w_in);
        return weights;
    }
    throw NumericError("generate_weights: reservoir matrix degenerate after 5 attempts");
}

StateMatrix run_reservoir(const std::vector<double>& input, const ReservoirWeights& weights,
                          double alpha, double washout_frac, const std::vector<double>* x0) {
    if (alpha <= 0.0 || alpha > 1.0) {
        throw DataError("run_reservoir: alpha must lie in (0, 1], got " +
                        std::to_string(alpha));
    }
    const std::size_t t_len = input.size();
    const auto n = static_cast<std::size_t>(weights.size);
    const auto washout =
        static_cast<std::size_t>(std::floor(washout_frac * static_cast<double>(t_len)));
    if (t_len == 0 || washout >= t_len) {
        throw DataError("run_reservoir: input of length " + std::to_string(t_len) +
                        " leaves no rows after washout");
    }

    std::vector<double> state(n, 0.0);
    if (x0 != nullptr) {
        if (x0->size() != n) throw DataError("run_reservoir: x0 has wrong dimension");
        state = *x0;
    }

    StateMatrix out;
    out.washout = washout;
    out.states = Matrix(t_len - washout, n + 1);

    std::vector<double> next(n);
    for (std::size_t t = 0; t < t_len; ++t) {
        const double u = input[t];
        for (std::size_t i = 0; i < n; ++i) {
            double acc = weights.w_in(i, 0) * u;
            for (std::size_t j = 0; j < n; ++j) acc += weights.w(i, j) * state[j];
            next[i] = (1.0 - alpha) * state[i] + alpha * std::tanh(acc);
            // tanh and convex mixing keep states inside [-1, 1]; clamp the
            // odd half-ulp rounding overshoot so the bound is exact.
            next[i] = std::clamp(next[i], -1.0, 1.0);
            if (!std::isfinite(next[i])) {
                throw NumericError("run_reservoir: non-finite state at step " +
                                   std::to_string(t + 1));
            }
        }
        state.swap(next);
        if (t >= washout) {
            const std::size_t row = t - washout;
            out.states(row, 0) = 1.0;
            for (std::size_t i = 0; i < n; ++i) out.states(row, i + 1) = state[i];
        }
    }
    out.x_final = std::move(state);
    return out;
}

}  // namespace esn
