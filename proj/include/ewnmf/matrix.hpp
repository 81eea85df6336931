#ifndef EWNMF_MATRIX_HPP
#define EWNMF_MATRIX_HPP

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "ewnmf/errors.hpp"

namespace ewnmf {

// Floor applied to denominators before elementwise division (and to products
// before logs / negative powers). Overridable per call site.
inline constexpr double kDefaultEps = 1e-12;

// Dense real matrix, row-major, 64-bit elements.
class DenseMatrix {
public:
    DenseMatrix() = default;

    DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> data);

    // Convenience constructor for literals in tests and small fixtures.
    static DenseMatrix from_rows(std::initializer_list<std::initializer_list<double>> rows);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }
    std::span<const double> values() const { return data_; }

    bool same_shape(const DenseMatrix& other) const {
        return rows_ == other.rows_ && cols_ == other.cols_;
    }

    friend bool operator==(const DenseMatrix&, const DenseMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

// C_ij = A_ij * B_ij. Shapes must match.
DenseMatrix hadamard(const DenseMatrix& a, const DenseMatrix& b);

// C_ij = A_ij / max(B_ij, eps). Shapes must match, eps > 0.
DenseMatrix safe_divide(const DenseMatrix& a, const DenseMatrix& b, double eps = kDefaultEps);

// Standard matrix product. a.cols() must equal b.rows().
DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);

DenseMatrix transpose(const DenseMatrix& a);

// C = A - B elementwise.
DenseMatrix subtract(const DenseMatrix& a, const DenseMatrix& b);

// Sum of squared elements; zero exactly when the matrix is all-zero.
double frobenius_sq(const DenseMatrix& a);

bool is_nonnegative(const DenseMatrix& a);
bool all_finite(const DenseMatrix& a);

// Largest absolute elementwise difference; shapes must match.
double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b);

} // namespace ewnmf

#endif
