#include "ewnmf/factorization.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "ewnmf/data.hpp"

namespace ewnmf {

namespace {

// Column softmax of exp(-d/gamma), shifted per column by the minimum of d so
// the largest exponential is exactly 1. The shift is mathematically exact and
// keeps small gammas from underflowing every entry at once.
DenseMatrix column_softmax_neg(const DenseMatrix& d, double gamma) {
    if (!(gamma > 0.0)) {
        throw DomainError("weight update: gamma must be positive; use the hard-weight "
                          "update for the gamma -> 0 limit");
    }
    const std::size_t m = d.rows();
    const std::size_t n = d.cols();
    DenseMatrix t(m, n);
    for (std::size_t j = 0; j < n; ++j) {
        double dmin = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < m; ++i) dmin = std::min(dmin, d(i, j));
        double sum = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            const double e = std::isfinite(d(i, j)) ? std::exp(-(d(i, j) - dmin) / gamma) : 0.0;
            t(i, j) = e;
            sum += e;
        }
        if (sum > 0.0) {
            for (std::size_t i = 0; i < m; ++i) t(i, j) /= sum;
        } else {
            for (std::size_t i = 0; i < m; ++i) t(i, j) = 1.0 / static_cast<double>(m);
        }
    }
    return t;
}

void require_weight_shape(const DenseMatrix& t, const DenseMatrix& x, const char* op) {
    if (!t.same_shape(x)) {
        throw DimensionError(std::string(op) + ": weight matrix must match the data shape");
    }
}

// Enforced after every T update inside the loop.
void require_simplex_columns(const DenseMatrix& t, std::size_t iteration) {
    for (std::size_t j = 0; j < t.cols(); ++j) {
        double sum = 0.0;
        for (std::size_t i = 0; i < t.rows(); ++i) sum += t(i, j);
        if (std::abs(sum - 1.0) > 1e-12) {
            throw ConstraintError("weight column " + std::to_string(j) + " sums to " +
                                  std::to_string(sum) + " at iteration " +
                                  std::to_string(iteration));
        }
    }
}

} // namespace

Residuals compute_residuals(const DenseMatrix& x, const DenseMatrix& wh) {
    Residuals r;
    r.error = subtract(x, wh);
    r.squared = hadamard(r.error, r.error);
    return r;
}

DenseMatrix update_w_nmf(const DenseMatrix& x, const DenseMatrix& w, const DenseMatrix& h,
                         double eps) {
    const DenseMatrix ht = transpose(h);
    const DenseMatrix numer = matmul(x, ht);
    const DenseMatrix denom = matmul(matmul(w, h), ht);
    return hadamard(w, safe_divide(numer, denom, eps));
}

DenseMatrix update_h_nmf(const DenseMatrix& x, const DenseMatrix& w, const DenseMatrix& h,
                         double eps) {
    const DenseMatrix wt = transpose(w);
    const DenseMatrix numer = matmul(wt, x);
    const DenseMatrix denom = matmul(wt, matmul(w, h));
    return hadamard(h, safe_divide(numer, denom, eps));
}

DenseMatrix update_w_weighted(const DenseMatrix& x, const DenseMatrix& w, const DenseMatrix& h,
                              const DenseMatrix& t, double eps) {
    require_weight_shape(t, x, "update_w_weighted");
    const DenseMatrix ht = transpose(h);
    const DenseMatrix numer = matmul(hadamard(t, x), ht);
    const DenseMatrix denom = matmul(hadamard(t, matmul(w, h)), ht);
    return hadamard(w, safe_divide(numer, denom, eps));
}

DenseMatrix update_h_weighted(const DenseMatrix& x, const DenseMatrix& w, const DenseMatrix& h,
                              const DenseMatrix& t, double eps) {
    require_weight_shape(t, x, "update_h_weighted");
    const DenseMatrix wt = transpose(w);
    const DenseMatrix numer = matmul(wt, hadamard(t, x));
    const DenseMatrix denom = matmul(wt, hadamard(t, matmul(w, h)));
    return hadamard(h, safe_divide(numer, denom, eps));
}

DenseMatrix update_t_entropy(const DenseMatrix& residuals_sq, double gamma) {
    return column_softmax_neg(residuals_sq, gamma);
}

DenseMatrix update_t_hard(const Residuals& residuals) {
    const DenseMatrix& e = residuals.error;
    DenseMatrix t(e.rows(), e.cols());
    for (std::size_t j = 0; j < e.cols(); ++j) {
        std::size_t best = 0;
        double best_abs = std::abs(e(0, j));
        for (std::size_t i = 1; i < e.rows(); ++i) {
            const double a = std::abs(e(i, j));
            if (a < best_abs) {
                best_abs = a;
                best = i;
            }
        }
        t(best, j) = 1.0;
    }
    return t;
}

DenseMatrix update_t_kl(const DenseMatrix& x, const DenseMatrix& wh, double gamma, double eps) {
    if (!x.same_shape(wh)) throw DimensionError("update_t_kl: shape mismatch");
    DenseMatrix d(x.rows(), x.cols());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double xi = x.data()[i];
        if (xi < 0.0) throw DomainError("update_t_kl: negative data entry");
        const double q = std::max(wh.data()[i], eps);
        d.data()[i] = (xi > 0.0) ? xi * std::log(xi / q) - xi + q : q;
    }
    return column_softmax_neg(d, gamma);
}

DenseMatrix update_t_alpha(const DenseMatrix& x, const DenseMatrix& wh, double alpha,
                           double gamma, double eps) {
    if (!x.same_shape(wh)) throw DimensionError("update_t_alpha: shape mismatch");
    if (alpha == 0.0 || alpha == 1.0) {
        throw DomainError("update_t_alpha: alpha must not be 0 or 1; use update_t_kl "
                          "for the alpha -> 1 limit");
    }
    // The prefactored divergence d/(alpha(alpha-1)) is nonnegative for every
    // admissible alpha, so the softmax argument keeps a consistent sign.
    const double prefactor = alpha * (alpha - 1.0);
    DenseMatrix d(x.rows(), x.cols());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double xi = x.data()[i];
        if (xi < 0.0) throw DomainError("update_t_alpha: negative data entry");
        const double q = std::max(wh.data()[i], eps);
        d.data()[i] = (std::pow(xi, alpha) * std::pow(q, 1.0 - alpha) -
                       alpha * xi + (alpha - 1.0) * q) / prefactor;
    }
    return column_softmax_neg(d, gamma);
}

FactorModel run_factorization(const DenseMatrix& x, const ObjectiveSpec& spec, std::size_t k,
                              std::size_t iters, std::uint64_t seed, double eps,
                              bool early_stop) {
    spec.validate();
    if (x.rows() == 0 || x.cols() == 0) throw ConfigError("run_factorization: empty data matrix");
    if (!is_nonnegative(x)) throw DomainError("run_factorization: data matrix must be nonnegative");
    if (k < 1 || k > std::min(x.rows(), x.cols())) {
        throw ConfigError("run_factorization: rank " + std::to_string(k) +
                          " exceeds min(" + std::to_string(x.rows()) + ", " +
                          std::to_string(x.cols()) + ")");
    }
    if (iters < 1) throw ConfigError("run_factorization: need at least one iteration");
    if (spec.family == DivergenceFamily::WeightedKL ||
        spec.family == DivergenceFamily::WeightedAlpha) {
        throw ConfigError("run_factorization: the " + family_name(spec.family) +
                          " family defines only the weight update; W/H update rules under "
                          "those weights are not available");
    }

    FactorModel model;
    auto [w, h] = init_factors(x.rows(), x.cols(), k, seed);
    std::optional<DenseMatrix> t;

    model.cost_trace.reserve(iters);
    int stable_steps = 0;
    for (std::size_t it = 0; it < iters; ++it) {
        if (spec.uses_weights()) {
            const Residuals res = compute_residuals(x, matmul(w, h));
            if (spec.family == DivergenceFamily::WeightedFrobenius) {
                t = update_t_entropy(res.squared, spec.gamma);
            } else { // HardWeight
                t = update_t_hard(res);
            }
            require_simplex_columns(*t, it);
            w = update_w_weighted(x, w, h, *t, eps);
            h = update_h_weighted(x, w, h, *t, eps);
        } else {
            w = update_w_nmf(x, w, h, eps);
            h = update_h_nmf(x, w, h, eps);
        }
        const double cost = evaluate_cost(spec, x, w, h, t ? &*t : nullptr);
        if (!std::isfinite(cost)) {
            throw NumericalError("run_factorization: non-finite cost at iteration " +
                                 std::to_string(it));
        }
        model.cost_trace.push_back(cost);

        if (early_stop && model.cost_trace.size() >= 2) {
            const double prev = model.cost_trace[model.cost_trace.size() - 2];
            if (std::abs(cost - prev) < 1e-6 * (1.0 + std::abs(prev))) {
                if (++stable_steps >= 5) break;
            } else {
                stable_steps = 0;
            }
        }
    }

    model.w = std::move(w);
    model.h = std::move(h);
    model.t = std::move(t);
    model.iterations = model.cost_trace.size();
    return model;
}

} // namespace ewnmf
