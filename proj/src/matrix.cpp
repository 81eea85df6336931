#include "ewnmf/matrix.hpp"

#include <cmath>
#include <string>

namespace ewnmf {

namespace {

std::string shape_str(const DenseMatrix& a) {
    return std::to_string(a.rows()) + "x" + std::to_string(a.cols());
}

void require_same_shape(const DenseMatrix& a, const DenseMatrix& b, const char* op) {
    if (!a.same_shape(b)) {
        throw DimensionError(std::string(op) + ": shape mismatch " + shape_str(a) +
                             " vs " + shape_str(b));
    }
}

} // namespace

DenseMatrix::DenseMatrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) {
        throw DimensionError("DenseMatrix: data length " + std::to_string(data_.size()) +
                             " does not equal rows*cols = " + std::to_string(rows_ * cols_));
    }
}

DenseMatrix DenseMatrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
    DenseMatrix m;
    m.rows_ = rows.size();
    m.cols_ = rows.size() ? rows.begin()->size() : 0;
    m.data_.reserve(m.rows_ * m.cols_);
    for (const auto& row : rows) {
        if (row.size() != m.cols_) {
            throw DimensionError("DenseMatrix::from_rows: ragged rows");
        }
        m.data_.insert(m.data_.end(), row.begin(), row.end());
    }
    return m;
}

DenseMatrix hadamard(const DenseMatrix& a, const DenseMatrix& b) {
    require_same_shape(a, b, "hadamard");
    DenseMatrix c(a.rows(), a.cols());
    const double* pa = a.data();
    const double* pb = b.data();
    double* pc = c.data();
    for (std::size_t i = 0; i < a.size(); ++i) pc[i] = pa[i] * pb[i];
    return c;
}

DenseMatrix safe_divide(const DenseMatrix& a, const DenseMatrix& b, double eps) {
    require_same_shape(a, b, "safe_divide");
    if (!(eps > 0.0)) throw DomainError("safe_divide: eps must be positive");
    DenseMatrix c(a.rows(), a.cols());
    const double* pa = a.data();
    const double* pb = b.data();
    double* pc = c.data();
    for (std::size_t i = 0; i < a.size(); ++i) pc[i] = pa[i] / std::max(pb[i], eps);
    return c;
}

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.cols() != b.rows()) {
        throw DimensionError("matmul: inner dimensions disagree, " + shape_str(a) +
                             " * " + shape_str(b));
    }
    DenseMatrix c(a.rows(), b.cols());
    const std::size_t n = b.cols();
    // i-k-j order keeps both B and C accesses contiguous in row-major storage.
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double* crow = c.data() + i * n;
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const double aik = a(i, k);
            const double* brow = b.data() + k * n;
            for (std::size_t j = 0; j < n; ++j) crow[j] += aik * brow[j];
        }
    }
    return c;
}

DenseMatrix transpose(const DenseMatrix& a) {
    DenseMatrix t(a.cols(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
    return t;
}

DenseMatrix subtract(const DenseMatrix& a, const DenseMatrix& b) {
    require_same_shape(a, b, "subtract");
    DenseMatrix c(a.rows(), a.cols());
    const double* pa = a.data();
    const double* pb = b.data();
    double* pc = c.data();
    for (std::size_t i = 0; i < a.size(); ++i) pc[i] = pa[i] - pb[i];
    return c;
}

double frobenius_sq(const DenseMatrix& a) {
    double sum = 0.0;
    for (double v : a.values()) sum += v * v;
    return sum;
}

bool is_nonnegative(const DenseMatrix& a) {
    for (double v : a.values())
        if (!(v >= 0.0)) return false;
    return true;
}

bool all_finite(const DenseMatrix& a) {
    for (double v : a.values())
        if (!std::isfinite(v)) return false;
    return true;
}

double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b) {
    require_same_shape(a, b, "max_abs_diff");
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
    return m;
}

} // namespace ewnmf
