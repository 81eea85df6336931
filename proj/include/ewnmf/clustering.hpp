#ifndef EWNMF_CLUSTERING_HPP
#define EWNMF_CLUSTERING_HPP

#include <cstdint>
#include <vector>

#include "ewnmf/matrix.hpp"

namespace ewnmf {

using LabelVector = std::vector<int>;

struct ClusteringResult {
    LabelVector assignments;          // cluster index per point
    DenseMatrix centroids;            // dim x k, one centroid per column
    double inertia = 0.0;             // sum of squared distances to assigned centroid
    std::vector<double> inertia_trace; // per Lloyd iteration of the winning restart
};

// Lloyd's algorithm with k-means++ seeding on the columns of `points`.
// Runs `restarts` independent attempts and keeps the lowest inertia (ties go
// to the earliest restart). Empty clusters are repaired by relocating the
// centroid onto the point currently farthest from its own centroid.
// Deterministic for a fixed seed.
ClusteringResult kmeans(const DenseMatrix& points, std::size_t k, std::uint64_t seed,
                        std::size_t restarts = 10, std::size_t max_iters = 100);

// Clustering accuracy: fraction of points whose cluster label maps onto the
// true class under the matching that maximizes total agreement (optimal
// assignment on the confusion matrix).
double accuracy(const LabelVector& y, const LabelVector& y_pred);

// Mutual information normalized by the larger marginal entropy, natural log,
// in [0, 1]. Two single-class labelings score 1.
double nmi(const LabelVector& y, const LabelVector& y_pred);

// Relabels to contiguous 0..C-1 in first-appearance order.
LabelVector canonicalize_labels(const LabelVector& labels);

} // namespace ewnmf

#endif
