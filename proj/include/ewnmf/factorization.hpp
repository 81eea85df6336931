#ifndef EWNMF_FACTORIZATION_HPP
#define EWNMF_FACTORIZATION_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "ewnmf/matrix.hpp"
#include "ewnmf/objectives.hpp"

namespace ewnmf {

// Result of one factorization run: X ~ WH, optionally with per-entry
// attribute weights T (column-stochastic).
struct FactorModel {
    DenseMatrix w;               // base matrix, M x K
    DenseMatrix h;               // representation matrix, K x N
    std::optional<DenseMatrix> t; // attribute weights, M x N, columns sum to 1
    std::size_t iterations = 0;
    std::vector<double> cost_trace; // objective after each full update cycle
};

struct Residuals {
    DenseMatrix error;   // X - WH
    DenseMatrix squared; // (X - WH)^2 elementwise
};

Residuals compute_residuals(const DenseMatrix& x, const DenseMatrix& wh);

// Multiplicative updates for the plain least-squares factorization:
//   W <- W .* (X H') ./ (W H H'),  H <- H .* (W' X) ./ (W' W H)
DenseMatrix update_w_nmf(const DenseMatrix& x, const DenseMatrix& w, const DenseMatrix& h,
                         double eps = kDefaultEps);
DenseMatrix update_h_nmf(const DenseMatrix& x, const DenseMatrix& w, const DenseMatrix& h,
                         double eps = kDefaultEps);

// Weighted counterparts with per-entry weights T:
//   W <- W .* [(T .* X) H'] ./ {[T .* (WH)] H'}
//   H <- H .* [W' (T .* X)] ./ {W' [T .* (WH)]}
DenseMatrix update_w_weighted(const DenseMatrix& x, const DenseMatrix& w, const DenseMatrix& h,
                              const DenseMatrix& t, double eps = kDefaultEps);
DenseMatrix update_h_weighted(const DenseMatrix& x, const DenseMatrix& w, const DenseMatrix& h,
                              const DenseMatrix& t, double eps = kDefaultEps);

// Closed-form weight update for the entropy-regularized squared-error cost:
// column softmax of -r/gamma over the squared residuals r, stabilized by
// subtracting each column's minimum residual before exponentiation.
DenseMatrix update_t_entropy(const DenseMatrix& residuals_sq, double gamma);

// gamma -> 0 limit: all mass on the row with the smallest |error| per column,
// ties broken by the lowest row index.
DenseMatrix update_t_hard(const Residuals& residuals);

// Weight updates for the KL and alpha-divergence costs (the per-entry
// divergence replaces the squared residual in the softmax).
DenseMatrix update_t_kl(const DenseMatrix& x, const DenseMatrix& wh, double gamma,
                        double eps = kDefaultEps);
DenseMatrix update_t_alpha(const DenseMatrix& x, const DenseMatrix& wh, double alpha,
                           double gamma, double eps = kDefaultEps);

// Runs the full alternating loop: W, H drawn uniform on [0.1, 1.1] from the
// seed, then per iteration a T update (per the objective family; skipped for
// plain Frobenius) followed by the W and H updates, recording the objective
// after each full cycle.
//
// Supported families: Frobenius, WeightedFrobenius, HardWeight. The KL and
// alpha families only define the T update; W/H update rules under those
// weights are not part of this library, so the loop rejects them.
//
// With early_stop the loop ends once the relative cost change stays below
// 1e-6 for 5 consecutive iterations; off by default, so the trace normally
// has exactly `iters` entries.
FactorModel run_factorization(const DenseMatrix& x, const ObjectiveSpec& spec, std::size_t k,
                              std::size_t iters, std::uint64_t seed,
                              double eps = kDefaultEps, bool early_stop = false);

} // namespace ewnmf

#endif
