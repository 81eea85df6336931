#ifndef EWNMF_DATA_HPP
#define EWNMF_DATA_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ewnmf/matrix.hpp"

namespace ewnmf {

// Data matrix whose columns are data points, with one class label per column.
struct LabeledDataset {
    DenseMatrix x;
    std::vector<int> labels;
    std::string name;
};

// Two-source mixing fixture for the unmixing demo. `mixed` holds
// mixing * sources with the leading [corrupt_begin, corrupt_end) samples of
// its first row replaced by noise.
struct MixtureDemo {
    DenseMatrix sources; // 2 x L
    DenseMatrix mixing;  // 2 x 2, entries uniform on [0, 1]
    DenseMatrix mixed;   // 2 x L
    std::size_t corrupt_begin = 0;
    std::size_t corrupt_end = 0;
};

// Numeric comma-separated file, no header, rows are attributes and columns
// are data points. Rejects ragged rows and negative entries.
DenseMatrix load_matrix_csv(const std::string& path);

// One integer per line; line i labels column i.
std::vector<int> load_labels(const std::string& path);

void write_matrix_csv(const std::string& path, const DenseMatrix& a);
void write_labels(const std::string& path, const std::vector<int>& labels);

// Fixed %.12g rendering used by every CSV writer, so files are byte-identical
// across reruns.
std::string format_csv_value(double v);

// Maps each column through (x - min) / (max - min); constant columns become
// all-zero.
DenseMatrix minmax_normalize_columns(const DenseMatrix& x);

// W (M x K) and H (K x N) drawn i.i.d. uniform on [0.1, 1.1]; W filled first,
// both row-major, so a fixed seed pins every entry.
std::pair<DenseMatrix, DenseMatrix> init_factors(std::size_t m, std::size_t n, std::size_t k,
                                                 std::uint64_t seed);

// Two rectified sinusoid sources of distinct frequencies, mixed by a random
// 2 x 2 matrix with entries uniform on [0, 1]; the first ceil(f * L) samples
// of the first mixed signal are overwritten with uniform noise on
// [0, 5 * max(mixed)]. f == 0 yields an uncorrupted control.
MixtureDemo gen_mixture_demo(std::size_t length, double corrupt_fraction, std::uint64_t seed);

// k Gaussian-bump class prototypes over M attributes plus per-point noise,
// rectified to nonnegative; a fraction of each point's attributes is then
// overwritten with large outlier values.
LabeledDataset gen_clustered_synthetic(std::size_t k, std::size_t points_per_class,
                                       std::size_t attributes, double corrupt_attr_fraction,
                                       std::uint64_t seed);

// Keeps only the columns whose label falls in k uniformly chosen distinct
// classes; column order is preserved and labels are re-canonicalized to
// 0..k-1 in ascending order of the retained original classes.
LabeledDataset sample_class_subset(const LabeledDataset& ds, std::size_t k, std::uint64_t seed);

std::size_t count_classes(const std::vector<int>& labels);

} // namespace ewnmf

#endif
