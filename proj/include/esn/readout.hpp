#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "esn/linalg.hpp"

namespace esn {

enum class IcKind { Aic, Aicc, Bic, Hqc };

const char* ic_name(IcKind kind);
IcKind ic_from_name(const std::string& name);

struct RidgeFit {
    std::vector<double> w_out;  // intercept first
    double lambda = 0.0;
    double df = 0.0;  // effective degrees of freedom
    double rss = 0.0;
    double ic_value = 0.0;
    IcKind ic_kind = IcKind::Aic;
};

struct LambdaSearchSpec {
    double lo = 1e-4;
    double hi = 2.0;
    int num_candidates = 1;  // K, scaled as 2N by the caller
    std::uint64_t seed = 0;
};

/// Solves (XᵀX + R_λ) w = Xᵀy with R_λ = diag(0, λ, ..., λ); the intercept
/// column is never penalized.
std::vector<double> ridge_solve(const Matrix& x, const std::vector<double>& y, double lambda);

/// Trace of the ridge hat matrix X (XᵀX + R_λ)⁻¹ Xᵀ.
double effective_dof(const Matrix& x, double lambda);

/// Gaussian concentrated-likelihood information criteria with the ridge
/// effective degrees of freedom as the parameter count. rss == 0 returns
/// -infinity; the AICc pole (t_eff <= df + 1) returns +infinity.
double information_criterion(double rss, std::size_t t_eff, double df, IcKind kind);

/// Random search: K draws uniform on [lo, hi], one ridge fit per draw, lowest
/// information criterion wins, ties broken toward the smaller lambda.
RidgeFit select_lambda(const Matrix& x, const std::vector<double>& y,
                       const LambdaSearchSpec& spec, IcKind kind);

}  // namespace esn
