#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace datl {

// Dense row-major matrix of doubles. Sized for this problem domain
// (hundreds of rows), not for BLAS-scale work.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    std::span<const double> row(std::size_t i) const {
        return std::span<const double>(data_.data() + i * cols_, cols_);
    }
    std::span<double> row(std::size_t i) {
        return std::span<double>(data_.data() + i * cols_, cols_);
    }

    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }

    bool operator==(const Matrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

double squared_distance(std::span<const double> a, std::span<const double> b);
double dot(std::span<const double> a, std::span<const double> b);

// Solves A x = b for symmetric positive-definite A via Cholesky.
// Throws NumericFailureError if a pivot is not strictly positive.
std::vector<double> cholesky_solve(const Matrix& a, const std::vector<double>& b);

double vector_mean(std::span<const double> v);
// Population standard deviation (divides by N).
double vector_stdev(std::span<const double> v);

} // namespace datl
