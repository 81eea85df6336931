#include "ewnmf/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

#include "ewnmf/rng.hpp"

namespace ewnmf {

namespace {

double dist_sq(const DenseMatrix& points, std::size_t col, const DenseMatrix& centroids,
               std::size_t c) {
    double sum = 0.0;
    for (std::size_t i = 0; i < points.rows(); ++i) {
        const double d = points(i, col) - centroids(i, c);
        sum += d * d;
    }
    return sum;
}

DenseMatrix kmeanspp_seed(const DenseMatrix& points, std::size_t k, Rng& rng) {
    const std::size_t n = points.cols();
    const std::size_t dim = points.rows();
    DenseMatrix centroids(dim, k);
    std::vector<double> nearest(n, std::numeric_limits<double>::infinity());

    std::size_t first = rng.below(n);
    for (std::size_t i = 0; i < dim; ++i) centroids(i, 0) = points(i, first);

    for (std::size_t c = 1; c < k; ++c) {
        double total = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            nearest[j] = std::min(nearest[j], dist_sq(points, j, centroids, c - 1));
            total += nearest[j];
        }
        std::size_t chosen;
        if (total > 0.0) {
            const double r = rng.uniform() * total;
            double acc = 0.0;
            chosen = n - 1;
            for (std::size_t j = 0; j < n; ++j) {
                acc += nearest[j];
                if (acc >= r) {
                    chosen = j;
                    break;
                }
            }
        } else {
            // All remaining points coincide with a centroid already.
            chosen = rng.below(n);
        }
        for (std::size_t i = 0; i < dim; ++i) centroids(i, c) = points(i, chosen);
    }
    return centroids;
}

ClusteringResult lloyd(const DenseMatrix& points, std::size_t k, Rng& rng,
                       std::size_t max_iters) {
    const std::size_t n = points.cols();
    const std::size_t dim = points.rows();

    ClusteringResult result;
    result.centroids = kmeanspp_seed(points, k, rng);
    result.assignments.assign(n, 0);

    std::vector<std::size_t> counts(k, 0);
    for (std::size_t iter = 0; iter < max_iters; ++iter) {
        // Assignment step; ties go to the lowest centroid index.
        bool changed = false;
        std::fill(counts.begin(), counts.end(), 0);
        double inertia = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            std::size_t best = 0;
            double best_d = dist_sq(points, j, result.centroids, 0);
            for (std::size_t c = 1; c < k; ++c) {
                const double d = dist_sq(points, j, result.centroids, c);
                if (d < best_d) {
                    best_d = d;
                    best = c;
                }
            }
            if (result.assignments[j] != static_cast<int>(best)) {
                result.assignments[j] = static_cast<int>(best);
                changed = true;
            }
            counts[best]++;
            inertia += best_d;
        }

        // Empty-cluster repair: move the centroid onto the point farthest
        // from its current centroid, one point per empty cluster.
        std::vector<bool> claimed(n, false);
        for (std::size_t c = 0; c < k; ++c) {
            if (counts[c] > 0) continue;
            std::size_t far = n;
            double far_d = -1.0;
            for (std::size_t j = 0; j < n; ++j) {
                if (claimed[j]) continue;
                const auto owner = static_cast<std::size_t>(result.assignments[j]);
                if (counts[owner] <= 1) continue; // don't empty another cluster
                const double d = dist_sq(points, j, result.centroids, owner);
                if (d > far_d) {
                    far_d = d;
                    far = j;
                }
            }
            if (far == n) break; // nothing movable (k close to n with duplicates)
            const auto old_owner = static_cast<std::size_t>(result.assignments[far]);
            inertia -= far_d;
            counts[old_owner]--;
            counts[c]++;
            claimed[far] = true;
            result.assignments[far] = static_cast<int>(c);
            for (std::size_t i = 0; i < dim; ++i) result.centroids(i, c) = points(i, far);
            changed = true;
        }

        result.inertia = inertia;
        result.inertia_trace.push_back(inertia);
        if (!changed && iter > 0) break;

        // Update step: centroid = mean of its members.
        DenseMatrix sums(dim, k);
        for (std::size_t j = 0; j < n; ++j) {
            const auto c = static_cast<std::size_t>(result.assignments[j]);
            for (std::size_t i = 0; i < dim; ++i) sums(i, c) += points(i, j);
        }
        for (std::size_t c = 0; c < k; ++c) {
            if (counts[c] == 0) continue;
            const double inv = 1.0 / static_cast<double>(counts[c]);
            for (std::size_t i = 0; i < dim; ++i) result.centroids(i, c) = sums(i, c) * inv;
        }
    }
    return result;
}

// Minimum-cost perfect assignment on a square cost matrix via shortest
// augmenting paths with potentials. Returns col_of_row.
std::vector<std::size_t> solve_assignment(const std::vector<std::vector<double>>& cost) {
    const std::size_t n = cost.size();
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<std::size_t> row_of_col(n + 1, 0); // 1-based rows; 0 = free
    std::vector<std::size_t> prev_col(n + 1, 0);

    for (std::size_t i = 1; i <= n; ++i) {
        row_of_col[0] = i;
        std::size_t j0 = 0;
        std::vector<double> min_slack(n + 1, std::numeric_limits<double>::infinity());
        std::vector<bool> used(n + 1, false);
        do {
            used[j0] = true;
            const std::size_t i0 = row_of_col[j0];
            double delta = std::numeric_limits<double>::infinity();
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if (cur < min_slack[j]) {
                    min_slack[j] = cur;
                    prev_col[j] = j0;
                }
                if (min_slack[j] < delta) {
                    delta = min_slack[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[row_of_col[j]] += delta;
                    v[j] -= delta;
                } else {
                    min_slack[j] -= delta;
                }
            }
            j0 = j1;
        } while (row_of_col[j0] != 0);
        do {
            const std::size_t j1 = prev_col[j0];
            row_of_col[j0] = row_of_col[j1];
            j0 = j1;
        } while (j0 != 0);
    }

    std::vector<std::size_t> col_of_row(n, 0);
    for (std::size_t j = 1; j <= n; ++j) col_of_row[row_of_col[j] - 1] = j - 1;
    return col_of_row;
}

std::vector<std::vector<std::size_t>> confusion_counts(const LabelVector& a,
                                                       const LabelVector& b,
                                                       std::size_t& na, std::size_t& nb) {
    const LabelVector ca = canonicalize_labels(a);
    const LabelVector cb = canonicalize_labels(b);
    na = ca.empty() ? 0 : static_cast<std::size_t>(*std::max_element(ca.begin(), ca.end())) + 1;
    nb = cb.empty() ? 0 : static_cast<std::size_t>(*std::max_element(cb.begin(), cb.end())) + 1;
    std::vector<std::vector<std::size_t>> counts(na, std::vector<std::size_t>(nb, 0));
    for (std::size_t i = 0; i < ca.size(); ++i) {
        counts[static_cast<std::size_t>(ca[i])][static_cast<std::size_t>(cb[i])]++;
    }
    return counts;
}

void require_comparable(const LabelVector& y, const LabelVector& y_pred, const char* op) {
    if (y.size() != y_pred.size()) {
        throw DimensionError(std::string(op) + ": labelings have different lengths");
    }
    if (y.empty()) throw DimensionError(std::string(op) + ": empty labelings");
}

} // namespace

ClusteringResult kmeans(const DenseMatrix& points, std::size_t k, std::uint64_t seed,
                        std::size_t restarts, std::size_t max_iters) {
    if (k < 1 || k > points.cols()) {
        throw ConfigError("kmeans: k = " + std::to_string(k) + " with " +
                          std::to_string(points.cols()) + " points");
    }
    if (restarts < 1) throw ConfigError("kmeans: need at least one restart");

    ClusteringResult best;
    best.inertia = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < restarts; ++r) {
        Rng rng(mix_seed({seed, 0x6b6d65616e73ull, r}));
        ClusteringResult run = lloyd(points, k, rng, max_iters);
        if (run.inertia < best.inertia) best = std::move(run);
    }
    return best;
}

LabelVector canonicalize_labels(const LabelVector& labels) {
    std::map<int, int> remap;
    LabelVector out(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const auto [it, inserted] = remap.emplace(labels[i], static_cast<int>(remap.size()));
        out[i] = it->second;
    }
    return out;
}

double accuracy(const LabelVector& y, const LabelVector& y_pred) {
    require_comparable(y, y_pred, "accuracy");
    std::size_t n_true = 0, n_pred = 0;
    const auto counts = confusion_counts(y_pred, y, n_pred, n_true);

    // Pad to square; maximize matches by minimizing negated counts.
    const std::size_t dim = std::max(n_true, n_pred);
    std::vector<std::vector<double>> cost(dim, std::vector<double>(dim, 0.0));
    for (std::size_t i = 0; i < n_pred; ++i)
        for (std::size_t j = 0; j < n_true; ++j)
            cost[i][j] = -static_cast<double>(counts[i][j]);

    const auto col_of_row = solve_assignment(cost);
    std::size_t matched = 0;
    for (std::size_t i = 0; i < n_pred; ++i) {
        if (col_of_row[i] < n_true) matched += counts[i][col_of_row[i]];
    }
    return static_cast<double>(matched) / static_cast<double>(y.size());
}

double nmi(const LabelVector& y, const LabelVector& y_pred) {
    require_comparable(y, y_pred, "nmi");
    std::size_t na = 0, nb = 0;
    const auto joint = confusion_counts(y, y_pred, na, nb);
    const double n = static_cast<double>(y.size());

    std::vector<double> pa(na, 0.0), pb(nb, 0.0);
    for (std::size_t i = 0; i < na; ++i)
        for (std::size_t j = 0; j < nb; ++j) {
            pa[i] += static_cast<double>(joint[i][j]) / n;
            pb[j] += static_cast<double>(joint[i][j]) / n;
        }

    double ha = 0.0, hb = 0.0;
    for (double p : pa)
        if (p > 0.0) ha -= p * std::log(p);
    for (double p : pb)
        if (p > 0.0) hb -= p * std::log(p);
    if (ha == 0.0 && hb == 0.0) return 1.0; // both single-class

    double mi = 0.0;
    for (std::size_t i = 0; i < na; ++i) {
        for (std::size_t j = 0; j < nb; ++j) {
            if (joint[i][j] == 0) continue;
            const double pij = static_cast<double>(joint[i][j]) / n;
            mi += pij * std::log(pij / (pa[i] * pb[j]));
        }
    }
    return mi / std::max(ha, hb);
}

} // namespace ewnmf
