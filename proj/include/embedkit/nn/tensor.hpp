#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace embedkit::nn {

// Dense row-major tensor of doubles, rank 1..3.
struct Tensor {
  std::vector<int> shape;
  std::vector<double> data;

  Tensor() = default;
  explicit Tensor(std::vector<int> s, double value = 0.0) : shape(std::move(s)) {
    size_t n = 1;
    for (int d : shape) n *= static_cast<size_t>(d);
    data.assign(n, value);
  }

  static Tensor vector(int n, double value = 0.0) { return Tensor({n}, value); }
  static Tensor matrix(int r, int c, double value = 0.0) {
    return Tensor({r, c}, value);
  }

  size_t size() const { return data.size(); }
  int rank() const { return static_cast<int>(shape.size()); }
  int dim(int i) const { return shape[static_cast<size_t>(i)]; }
  int rows() const { return shape[0]; }
  int cols() const { return shape[1]; }

  double& at(int i) { return data[static_cast<size_t>(i)]; }
  double at(int i) const { return data[static_cast<size_t>(i)]; }
  double& at(int i, int j) {
    return data[static_cast<size_t>(i) * static_cast<size_t>(shape[1]) +
                static_cast<size_t>(j)];
  }
  double at(int i, int j) const {
    return data[static_cast<size_t>(i) * static_cast<size_t>(shape[1]) +
                static_cast<size_t>(j)];
  }
  double& at(int i, int j, int k) {
    return data[(static_cast<size_t>(i) * static_cast<size_t>(shape[1]) +
                 static_cast<size_t>(j)) *
                    static_cast<size_t>(shape[2]) +
                static_cast<size_t>(k)];
  }
  double at(int i, int j, int k) const {
    return data[(static_cast<size_t>(i) * static_cast<size_t>(shape[1]) +
                 static_cast<size_t>(j)) *
                    static_cast<size_t>(shape[2]) +
                static_cast<size_t>(k)];
  }

  // Row i of a rank-2 tensor.
  std::span<double> row(int i) {
    return {data.data() + static_cast<size_t>(i) * static_cast<size_t>(shape[1]),
            static_cast<size_t>(shape[1])};
  }
  std::span<const double> row(int i) const {
    return {data.data() + static_cast<size_t>(i) * static_cast<size_t>(shape[1]),
            static_cast<size_t>(shape[1])};
  }

  void zero() { std::fill(data.begin(), data.end(), 0.0); }

  bool operator==(const Tensor&) const = default;
};

}  // namespace embedkit::nn
