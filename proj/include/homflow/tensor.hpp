#pragma once

#include <cstddef>
#include <vector>

namespace homflow {

/// Dense cube n x n x n, row-major in (a, b, c).
class Tensor3 {
 public:
  Tensor3() = default;
  explicit Tensor3(int n) : n_(n), v_(static_cast<std::size_t>(n) * n * n, 0.0) {}
  int dim() const { return n_; }
  double& operator()(int a, int b, int c) { return v_[(static_cast<std::size_t>(a) * n_ + b) * n_ + c]; }
  double operator()(int a, int b, int c) const {
    return v_[(static_cast<std::size_t>(a) * n_ + b) * n_ + c];
  }

 private:
  int n_ = 0;
  std::vector<double> v_;
};

/// Dense n^4 array, row-major in (a, b, c, d).
class Tensor4 {
 public:
  Tensor4() = default;
  explicit Tensor4(int n) : n_(n), v_(static_cast<std::size_t>(n) * n * n * n, 0.0) {}
  int dim() const { return n_; }
  double& operator()(int a, int b, int c, int d) { return v_[idx(a, b, c, d)]; }
  double operator()(int a, int b, int c, int d) const { return v_[idx(a, b, c, d)]; }

 private:
  std::size_t idx(int a, int b, int c, int d) const {
    return ((static_cast<std::size_t>(a) * n_ + b) * n_ + c) * n_ + d;
  }
  int n_ = 0;
  std::vector<double> v_;
};

}  // namespace homflow
