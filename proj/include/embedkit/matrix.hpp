#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

namespace embedkit {

// Dense row-major matrix of doubles.
class Matrix {
 public:
  Matrix() = default;
  Matrix(size_t rows, size_t cols, double value = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, value) {}

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }
  size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  std::span<double> row(size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }

  double& at(size_t i, size_t j) { return data_[i * cols_ + j]; }
  const double& at(size_t i, size_t j) const { return data_[i * cols_ + j]; }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }

  bool operator==(const Matrix&) const = default;

 private:
  size_t rows_ = 0, cols_ = 0;
  std::vector<double> data_;
};

// Unrolled dot product; the explicit four-way accumulation keeps the
// summation order fixed while giving the compiler instruction-level
// parallelism in the hot loops.
inline double dot(std::span<const double> a, std::span<const double> b) {
  const size_t n = a.size();
  const double* x = a.data();
  const double* y = b.data();
  double s0 = 0, s1 = 0, s2 = 0, s3 = 0;
  size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    s0 += x[i] * y[i];
    s1 += x[i + 1] * y[i + 1];
    s2 += x[i + 2] * y[i + 2];
    s3 += x[i + 3] * y[i + 3];
  }
  for (; i < n; ++i) s0 += x[i] * y[i];
  return (s0 + s1) + (s2 + s3);
}

// y += alpha * x
inline void axpy(double alpha, std::span<const double> x,
                 std::span<double> y) {
  const size_t n = x.size();
  for (size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

inline double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

// Cosine similarity; 0 when either vector has zero norm.
inline double cosine(std::span<const double> a, std::span<const double> b) {
  double na = norm(a), nb = norm(b);
  if (na == 0.0 || nb == 0.0) return 0.0;
  return dot(a, b) / (na * nb);
}

}  // namespace embedkit
