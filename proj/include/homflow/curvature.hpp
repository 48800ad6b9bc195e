#pragma once

#include <functional>
#include <optional>

#include <Eigen/Dense>

#include "homflow/algebra.hpp"
#include "homflow/catalog.hpp"
#include "homflow/tensor.hpp"

namespace homflow {

/// Inner products <X_i, X_j> of a left-invariant metric in the frame.
class FrameMetric {
 public:
  /// Throws ValidationError unless g is symmetric positive definite.
  explicit FrameMetric(Eigen::MatrixXd g);
  static FrameMetric diagonal(const std::vector<double>& entries);

  int dim() const { return static_cast<int>(g_.rows()); }
  const Eigen::MatrixXd& matrix() const { return g_; }
  const Eigen::MatrixXd& inverse() const { return ginv_; }
  bool is_diagonal() const { return diagonal_; }
  double operator()(int i, int j) const { return g_(i, j); }

 private:
  Eigen::MatrixXd g_;
  Eigen::MatrixXd ginv_;
  bool diagonal_ = false;
};

/// Curvature convention: R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z.
/// riemann(l, i, j, k) is the X_l component of R(X_i, X_j) X_k.
struct CurvatureReport {
  std::optional<Tensor3> connection;  // absent when an analytic factor is present
  Tensor4 riemann;
  Eigen::MatrixXd sectional;  // zero diagonal
  Eigen::MatrixXd ricci;
  double scalar = 0.0;
};

/// Levi-Civita connection of a left-invariant metric:
/// nabla_{X_i} X_j = sum_l gamma(l, i, j) X_l.
Tensor3 connection(const StructureConstants& sc, const FrameMetric& m);

Tensor4 riemann(const StructureConstants& sc, const FrameMetric& m);

/// K[i][j] = <R(X_i,X_j)X_j, X_i> / (g_ii g_jj - g_ij^2).
Eigen::MatrixXd sectional(const StructureConstants& sc, const FrameMetric& m);

Eigen::MatrixXd ricci(const StructureConstants& sc, const FrameMetric& m);

CurvatureReport curvature_report(const StructureConstants& sc, const FrameMetric& m);

/// Curvature of a (product) geometry with diagonal coefficient vector.
CurvatureReport curvature_report(const Geometry& geo, const CoeffVector& coeffs);

/// Ricci matrix only (no Riemann tensor); used on hot paths.
Eigen::MatrixXd ricci(const Geometry& geo, const CoeffVector& coeffs);

/// Largest |K[i][j]| over frame planes.
double max_abs_sectional(const Geometry& geo, const CoeffVector& coeffs);

/// Max-norm of R(X,Y)Z + R(Y,Z)X + R(Z,X)Y over frame triples.
double bianchi_residual(const Tensor4& riemann);

/// Sampler of a coordinate metric field: point -> symmetric matrix g_{ab}(x).
using MetricSampler = std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>;

struct OracleOptions {
  double step = 1e-3;
  bool richardson = false;
};

/// Ricci tensor of a coordinate metric at `point` by nested second-order central
/// differences (Christoffel symbols from metric differences, Riemann from
/// Christoffel differences). Independent of the frame engine.
Eigen::MatrixXd coordinate_ricci_oracle(const MetricSampler& metric, const Eigen::VectorXd& point,
                                        const OracleOptions& opt = {});

}  // namespace homflow
