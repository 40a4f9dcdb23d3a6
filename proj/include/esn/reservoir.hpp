#pragma once

#include <cstdint>
#include <vector>

#include "esn/linalg.hpp"

namespace esn {

/// Fixed random input and recurrent weights. W has spectral radius rho after
/// rescaling; roughly half of its entries are structurally zero.
struct ReservoirWeights {
    Matrix w_in;  // N x 1, dense uniform [-0.5, 0.5]
    Matrix w;     // N x N
    int size = 0;
    double rho = 0.0;
    std::uint64_t seed = 0;
};

/// Rule of thumb N = min(floor(tau * T), cap). Errors when floor(tau*T) == 0.
int reservoir_size(std::size_t sample_size, double tau, int cap = 200);

/// W = rho * W0 / spectral_radius(W0). Errors on a near-nilpotent W0.
Matrix rescale_to_spectral_radius(const Matrix& w0, double rho);

/// Draws W_in and a Bernoulli(density)-masked uniform W0, then rescales to
/// the target spectral radius. Deterministic given the seed; a pathological
/// mask triggers regeneration with an incremented sub-seed (up to 5 tries).
ReservoirWeights generate_weights(int n, double rho, std::uint64_t seed,
                                  double density = 0.5);

/// Post-washout design matrix with a leading intercept column plus the final
/// reservoir state.
struct StateMatrix {
    Matrix states;            // T' x (N+1), first column all ones
    std::size_t washout = 0;  // number of leading states dropped
    std::vector<double> x_final;
};

/// Leaky-integrator state evolution from x0 = 0 (or the given start state):
/// x_t = (1-alpha) x_{t-1} + alpha tanh(W_in u_t + W x_{t-1}).
/// The washout is floor(washout_frac * len(input)).
StateMatrix run_reservoir(const std::vector<double>& input, const ReservoirWeights& weights,
                          double alpha, double washout_frac = 0.05,
                          const std::vector<double>* x0 = nullptr);

}  // namespace esn
