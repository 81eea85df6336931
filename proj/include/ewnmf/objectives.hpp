#ifndef EWNMF_OBJECTIVES_HPP
#define EWNMF_OBJECTIVES_HPP

#include <string>

#include "ewnmf/matrix.hpp"

namespace ewnmf {

enum class DivergenceFamily {
    Frobenius,         // ||X - WH||_F^2, no weights
    WeightedFrobenius, // sum T (X - WH)^2 + gamma * sum T ln T
    WeightedKL,        // entropy-weighted KL divergence
    WeightedAlpha,     // entropy-weighted alpha divergence
    HardWeight,        // 0/1 weights, one per column (gamma -> 0 limit)
};

// Which cost a run optimizes, plus its hyperparameters.
struct ObjectiveSpec {
    DivergenceFamily family = DivergenceFamily::Frobenius;
    double gamma = 1.0; // entropy strength; unused by Frobenius / HardWeight
    double alpha = 2.0; // used only by WeightedAlpha; must not be 0 or 1

    static ObjectiveSpec frobenius();
    static ObjectiveSpec weighted_frobenius(double gamma);
    static ObjectiveSpec weighted_kl(double gamma);
    static ObjectiveSpec weighted_alpha(double alpha, double gamma);
    static ObjectiveSpec hard_weight();

    bool uses_weights() const { return family != DivergenceFamily::Frobenius; }
    bool needs_gamma() const {
        return family == DivergenceFamily::WeightedFrobenius ||
               family == DivergenceFamily::WeightedKL ||
               family == DivergenceFamily::WeightedAlpha;
    }

    // Throws DomainError on an invalid gamma/alpha combination.
    void validate() const;
};

std::string family_name(DivergenceFamily family);

// ||X - WH||_F^2
double cost_frobenius(const DenseMatrix& x, const DenseMatrix& w, const DenseMatrix& h);

// sum_ij T_ij (X - WH)_ij^2 + gamma * sum_ij T_ij ln T_ij, with 0 ln 0 := 0.
// T must be column-stochastic (each column sums to 1 within 1e-9).
double cost_weighted_frobenius(const DenseMatrix& x, const DenseMatrix& w,
                               const DenseMatrix& h, const DenseMatrix& t, double gamma);

// sum_ij T_ij [X log(X/WH) - X + WH] + gamma * sum_ij T_ij ln T_ij,
// with 0 log(0/q) := 0 and WH floored at eps before the log.
double cost_weighted_kl(const DenseMatrix& x, const DenseMatrix& w, const DenseMatrix& h,
                        const DenseMatrix& t, double gamma, double eps = kDefaultEps);

// (1/(alpha(alpha-1))) sum_ij T_ij [X^a (WH)^{1-a} - aX + (a-1)WH]
//   + gamma * sum_ij T_ij ln T_ij, with WH floored at eps.
double cost_weighted_alpha(const DenseMatrix& x, const DenseMatrix& w, const DenseMatrix& h,
                           const DenseMatrix& t, double alpha, double gamma,
                           double eps = kDefaultEps);

// Weighted squared residual sum without an entropy term; the HardWeight cost
// (a hard column has zero entropy, so no separate term is needed).
double cost_weighted_residual(const DenseMatrix& x, const DenseMatrix& w,
                              const DenseMatrix& h, const DenseMatrix& t);

// Dispatches to the family's cost. `t` may be null only for Frobenius.
double evaluate_cost(const ObjectiveSpec& spec, const DenseMatrix& x, const DenseMatrix& w,
                     const DenseMatrix& h, const DenseMatrix* t);

} // namespace ewnmf

#endif
