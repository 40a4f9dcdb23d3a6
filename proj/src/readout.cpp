#include "esn/readout.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

#include "esn/errors.hpp"
#include "esn/rng.hpp"

namespace esn {

const char* ic_name(IcKind kind) {
    switch (kind) {
        case IcKind::Aic: return "AIC";
        case IcKind::Aicc: return "AICc";
        case IcKind::Bic: return "BIC";
        case IcKind::Hqc: return "HQC";
    }
    return "?";
}

IcKind ic_from_name(const std::string& name) {
    if (name == "AIC" || name == "aic") return IcKind::Aic;
    if (name == "AICc" || name == "AICC" || name == "aicc") return IcKind::Aicc;
    if (name == "BIC" || name == "bic") return IcKind::Bic;
    if (name == "HQC" || name == "hqc") return IcKind::Hqc;
    throw DataError("unknown information criterion '" + name + "'");
}

namespace {

Matrix penalized_gram(const Matrix& g, double lambda) {
    Matrix a = g;
    for (std::size_t i = 1; i < a.rows(); ++i) a(i, i) += lambda;
    return a;
}

/// Factorization of XᵀX + R_λ. For lambda > 0 the system is positive definite
/// by construction; a 1e-10 diagonal jitter retries the factorization if
/// rounding ever breaks it. lambda == 0 with rank-deficient X stays an error.
Cholesky factor_penalized(const Matrix& g, double lambda) {
    try {
        return Cholesky(penalized_gram(g, lambda));
    } catch (const NumericError&) {
        if (lambda <= 0.0) throw;
    }
    Matrix jittered = penalized_gram(g, lambda);
    for (std::size_t i = 0; i < jittered.rows(); ++i) jittered(i, i) += 1e-10;
    return Cholesky(jittered);
}

std::vector<double> solve_from_gram(const Matrix& g, const std::vector<double>& xty,
                                    double lambda) {
    return factor_penalized(g, lambda).solve(xty);
}

double dof_from_gram(const Matrix& g, double lambda) {
    // tr[X (XᵀX+R)⁻¹ Xᵀ] = tr[(XᵀX+R)⁻¹ XᵀX] = (N+1) - λ Σ penalized (A⁻¹)_ii.
    const Matrix inv = factor_penalized(g, lambda).inverse();
    double penalized_trace = 0.0;
    for (std::size_t i = 1; i < inv.rows(); ++i) penalized_trace += inv(i, i);
    return static_cast<double>(inv.rows()) - lambda * penalized_trace;
}

double residual_sum_of_squares(const Matrix& x, const std::vector<double>& y,
                               const std::vector<double>& w) {
    const auto fitted = multiply(x, w);
    double rss = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double r = y[i] - fitted[i];
        rss += r * r;
    }
    return rss;
}

}  // namespace

std::vector<double> ridge_solve(const Matrix& x, const std::vector<double>& y, double lambda) {
    if (lambda < 0.0) throw DataError("ridge_solve: lambda must be >= 0");
    if (x.rows() < 2) throw DataError("ridge_solve: need at least 2 rows");
    if (x.rows() != y.size()) throw DataError("ridge_solve: X and y row counts differ");
    return solve_from_gram(gram(x), transpose_times(x, y), lambda);
}

double effective_dof(const Matrix& x, double lambda) {
    if (lambda < 0.0) throw DataError("effective_dof: lambda must be >= 0");
    return dof_from_gram(gram(x), lambda);
}

double information_criterion(double rss, std::size_t t_eff, double df, IcKind kind) {
    if (rss < 0.0) throw DataError("information_criterion: rss must be >= 0");
    if (t_eff < 2) throw DataError("information_criterion: need t_eff >= 2");
    if (rss == 0.0) return -std::numeric_limits<double>::infinity();

    const double t = static_cast<double>(t_eff);
    const double goodness = t * std::log(rss / t);
    switch (kind) {
        case IcKind::Aic: return goodness + 2.0 * df;
        case IcKind::Aicc: {
            const double denom = t - df - 1.0;
            if (denom <= 0.0) return std::numeric_limits<double>::infinity();
            return goodness + 2.0 * df + 2.0 * df * (df + 1.0) / denom;
        }
        case IcKind::Bic: return goodness + df * std::log(t);
        case IcKind::Hqc: return goodness + 2.0 * df * std::log(std::log(t));
    }
    throw std::logic_error("unreachable");
}

RidgeFit select_lambda(const Matrix& x, const std::vector<double>& y,
                       const LambdaSearchSpec& spec, IcKind kind) {
    if (spec.num_candidates < 1) throw DataError("select_lambda: need K >= 1 candidates");
    if (!(spec.lo < spec.hi)) throw DataError("select_lambda: need lo < hi");

    Rng rng(spec.seed);
    std::vector<double> candidates(static_cast<std::size_t>(spec.num_candidates));
    for (auto& c : candidates) c = rng.uniform(spec.lo, spec.hi);

    const Matrix g = gram(x);
    const auto xty = transpose_times(x, y);
    const std::size_t t_eff = x.rows();

    std::optional<RidgeFit> best;
    std::size_t failures = 0;
    std::string first_error;
    for (const double lambda : candidates) {
        try {
            RidgeFit fit;
            fit.lambda = lambda;
            fit.ic_kind = kind;
            fit.w_out = solve_from_gram(g, xty, lambda);
            fit.df = dof_from_gram(g, lambda);
            fit.rss = residual_sum_of_squares(x, y, fit.w_out);
            fit.ic_value = information_criterion(fit.rss, t_eff, fit.df, kind);
            const bool better =
                !best || fit.ic_value < best->ic_value ||
                (fit.ic_value == best->ic_value && fit.lambda < best->lambda);
            if (better) best = std::move(fit);
        } catch (const std::exception& e) {
            ++failures;
            if (first_error.empty()) first_error = e.what();
        }
    }
    if (!best) {
        throw NumericError("select_lambda: all " + std::to_string(failures) +
                           " candidate fits failed; first error: " + first_error);
    }
    return *best;
}

}  // namespace esn
