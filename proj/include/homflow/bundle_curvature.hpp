#pragma once

#include <functional>

#include <Eigen/Dense>

#include "homflow/tensor.hpp"

namespace homflow {

/// Bundle data at one point of a one-dimensional base with coordinate alpha:
/// base metric h and its first derivative, fiber metric G with two derivatives.
struct BundleJet {
  double h = 1.0;
  double h_a = 0.0;
  Eigen::MatrixXd G;
  Eigen::MatrixXd G_a;
  Eigen::MatrixXd G_aa;
};

/// Curvature of h dalpha^2 + G_ij dx^i dx^j. With a 1D base the families
/// R^alpha_{beta gamma delta} and R^i_{j alpha beta} vanish identically.
struct BundleCurvature {
  Eigen::MatrixXd R_alpha_i_alpha_j;  // R^alpha_{i alpha j}
  Tensor4 R_fiber;                    // R^i_{jkl}
  double ricci_base = 0.0;            // Rbar_{alpha alpha}
  Eigen::MatrixXd ricci_fiber;        // Rbar_ij
  double fiber_trace = 0.0;           // g^{ij} Rbar_ij
};

/// Component formulas, with Ricci taken from the closed expression that does not
/// assume constant fiber volume.
BundleCurvature bundle_curvature(const BundleJet& jet);

/// Ricci obtained by contracting the component families instead of the closed
/// expression. Returns (Rbar_{alpha alpha}, Rbar_ij) as a (1+N)x(1+N) matrix with zero mixed part.
Eigen::MatrixXd bundle_ricci_from_components(const BundleJet& jet);

/// -(1/sqrt|G|) h^{-1} (sqrt|G|)_{;alpha alpha}, the expected value of g^{ij} Rbar_ij.
double volume_laplacian_term(const BundleJet& jet);

/// Total-space metric in coordinates (alpha, x^1, ..., x^N); the sampler reads alpha = p(0).
using BundleSampler = std::function<BundleJet(double alpha)>;
Eigen::MatrixXd total_space_metric(const BundleSampler& sampler, const Eigen::VectorXd& point);

}  // namespace homflow
