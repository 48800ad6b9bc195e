#pragma once

#include <Eigen/Dense>

#include "homflow/catalog.hpp"
#include "homflow/curvature.hpp"

namespace homflow {

/// The limit soliton of a class. Throws UnsupportedError when it has none.
const SolitonSpec& soliton_catalog(const GeometryClass& cls);

/// (L_V g)_ii = -2 w_i g_ii / t for a diagonal metric, one weight per frame index.
/// Throws UnsupportedError for non-diagonal metrics.
Eigen::MatrixXd lie_derivative_diag(const std::vector<double>& weights, const FrameMetric& m, double t);

/// Same, with one weight per coefficient of a (product) geometry.
Eigen::MatrixXd lie_derivative_diag(const Geometry& geo, const std::vector<double>& weights,
                                    const CoeffVector& coeffs, double t);

struct ResidualReport {
  Eigen::MatrixXd components;  // Ric + L_V g / 2 + g / (2t) in the frame
  double max_norm = 0.0;
};

ResidualReport soliton_residual(const SolitonSpec& spec, double t);

/// Residual of arbitrary coefficients against the weights of `spec`.
ResidualReport soliton_residual(const SolitonSpec& spec, const CoeffVector& coeffs, double t);

/// max_i |g_i(t) - t^{1-2w_i} g_i(1)| / g_i(t).
double self_similarity_defect(const SolitonSpec& spec, double t);

/// Same for an arbitrary coefficient function.
double self_similarity_defect(const std::vector<double>& weights, const std::function<CoeffVector(double)>& coeffs,
                              double t);

/// Compares d/dt g_i = (1 - 2 w_i) g_i / t against -2 Ric_ii, relative to
/// max(1, |d/dt g_i|).
double flow_consistency_defect(const SolitonSpec& spec, double t);

}  // namespace homflow
