#include "ewnmf/objectives.hpp"

#include <cmath>

namespace ewnmf {

namespace {

void require_factor_shapes(const DenseMatrix& x, const DenseMatrix& w, const DenseMatrix& h) {
    if (w.rows() != x.rows() || h.cols() != x.cols() || w.cols() != h.rows()) {
        throw DimensionError("objective: factor shapes do not conform to X");
    }
}

// Column sums within 1e-9 of one; T nonnegative.
void require_column_stochastic(const DenseMatrix& t, const DenseMatrix& x) {
    if (!t.same_shape(x)) {
        throw DimensionError("objective: weight matrix must match the data shape");
    }
    for (std::size_t j = 0; j < t.cols(); ++j) {
        double sum = 0.0;
        for (std::size_t i = 0; i < t.rows(); ++i) {
            if (!(t(i, j) >= 0.0)) {
                throw ConstraintError("objective: negative weight entry");
            }
            sum += t(i, j);
        }
        if (std::abs(sum - 1.0) > 1e-9) {
            throw ConstraintError("objective: weight column " + std::to_string(j) +
                                  " sums to " + std::to_string(sum) + ", expected 1");
        }
    }
}

// sum T ln T with the 0 ln 0 := 0 convention.
double neg_entropy(const DenseMatrix& t) {
    double sum = 0.0;
    for (double v : t.values()) {
        if (v > 0.0) sum += v * std::log(v);
    }
    return sum;
}

} // namespace

ObjectiveSpec ObjectiveSpec::frobenius() {
    return {DivergenceFamily::Frobenius, 1.0, 2.0};
}

ObjectiveSpec ObjectiveSpec::weighted_frobenius(double gamma) {
    return {DivergenceFamily::WeightedFrobenius, gamma, 2.0};
}

ObjectiveSpec ObjectiveSpec::weighted_kl(double gamma) {
    return {DivergenceFamily::WeightedKL, gamma, 2.0};
}

ObjectiveSpec ObjectiveSpec::weighted_alpha(double alpha, double gamma) {
    return {DivergenceFamily::WeightedAlpha, gamma, alpha};
}

ObjectiveSpec ObjectiveSpec::hard_weight() {
    return {DivergenceFamily::HardWeight, 1.0, 2.0};
}

void ObjectiveSpec::validate() const {
    if (needs_gamma() && !(gamma > 0.0)) {
        throw DomainError("objective: gamma must be positive for " + family_name(family));
    }
    if (family == DivergenceFamily::WeightedAlpha && (alpha == 0.0 || alpha == 1.0)) {
        throw DomainError("objective: alpha must not be 0 or 1; use the weighted KL "
                          "family for the alpha -> 1 limit");
    }
}

std::string family_name(DivergenceFamily family) {
    switch (family) {
        case DivergenceFamily::Frobenius: return "frobenius";
        case DivergenceFamily::WeightedFrobenius: return "weighted-frobenius";
        case DivergenceFamily::WeightedKL: return "weighted-kl";
        case DivergenceFamily::WeightedAlpha: return "weighted-alpha";
        case DivergenceFamily::HardWeight: return "hard-weight";
    }
    return "unknown";
}

double cost_frobenius(const DenseMatrix& x, const DenseMatrix& w, const DenseMatrix& h) {
    require_factor_shapes(x, w, h);
    return frobenius_sq(subtract(x, matmul(w, h)));
}

double cost_weighted_residual(const DenseMatrix& x, const DenseMatrix& w,
                              const DenseMatrix& h, const DenseMatrix& t) {
    require_factor_shapes(x, w, h);
    require_column_stochastic(t, x);
    const DenseMatrix wh = matmul(w, h);
    double sum = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double e = x.data()[i] - wh.data()[i];
        sum += t.data()[i] * e * e;
    }
    return sum;
}

double cost_weighted_frobenius(const DenseMatrix& x, const DenseMatrix& w,
                               const DenseMatrix& h, const DenseMatrix& t, double gamma) {
    if (!(gamma > 0.0)) throw DomainError("cost_weighted_frobenius: gamma must be positive");
    return cost_weighted_residual(x, w, h, t) + gamma * neg_entropy(t);
}

double cost_weighted_kl(const DenseMatrix& x, const DenseMatrix& w, const DenseMatrix& h,
                        const DenseMatrix& t, double gamma, double eps) {
    require_factor_shapes(x, w, h);
    require_column_stochastic(t, x);
    if (!(gamma > 0.0)) throw DomainError("cost_weighted_kl: gamma must be positive");
    const DenseMatrix wh = matmul(w, h);
    double sum = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double xi = x.data()[i];
        if (xi < 0.0) throw DomainError("cost_weighted_kl: negative data entry");
        const double q = std::max(wh.data()[i], eps);
        // x log(x/q) - x + q; a zero x contributes q only.
        const double d = (xi > 0.0) ? xi * std::log(xi / q) - xi + q : q;
        sum += t.data()[i] * d;
    }
    return sum + gamma * neg_entropy(t);
}

double cost_weighted_alpha(const DenseMatrix& x, const DenseMatrix& w, const DenseMatrix& h,
                           const DenseMatrix& t, double alpha, double gamma, double eps) {
    require_factor_shapes(x, w, h);
    require_column_stochastic(t, x);
    if (alpha == 0.0 || alpha == 1.0) {
        throw DomainError("cost_weighted_alpha: alpha must not be 0 or 1; the alpha -> 1 "
                          "limit is the weighted KL cost");
    }
    const DenseMatrix wh = matmul(w, h);
    double sum = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double xi = x.data()[i];
        if (xi < 0.0) throw DomainError("cost_weighted_alpha: negative data entry");
        const double q = std::max(wh.data()[i], eps);
        const double d = std::pow(xi, alpha) * std::pow(q, 1.0 - alpha) -
                         alpha * xi + (alpha - 1.0) * q;
        sum += t.data()[i] * d;
    }
    return sum / (alpha * (alpha - 1.0)) + gamma * neg_entropy(t);
}

double evaluate_cost(const ObjectiveSpec& spec, const DenseMatrix& x, const DenseMatrix& w,
                     const DenseMatrix& h, const DenseMatrix* t) {
    spec.validate();
    if (spec.family == DivergenceFamily::Frobenius) {
        return cost_frobenius(x, w, h);
    }
    if (t == nullptr) {
        throw DomainError("evaluate_cost: " + family_name(spec.family) +
                          " requires a weight matrix");
    }
    switch (spec.family) {
        case DivergenceFamily::WeightedFrobenius:
            return cost_weighted_frobenius(x, w, h, *t, spec.gamma);
        case DivergenceFamily::WeightedKL:
            return cost_weighted_kl(x, w, h, *t, spec.gamma);
        case DivergenceFamily::WeightedAlpha:
            return cost_weighted_alpha(x, w, h, *t, spec.alpha, spec.gamma);
        case DivergenceFamily::HardWeight:
            return cost_weighted_residual(x, w, h, *t);
        case DivergenceFamily::Frobenius:
            break; // handled above
    }
    throw DomainError("evaluate_cost: unknown objective family");
}

} // namespace ewnmf
