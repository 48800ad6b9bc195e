#pragma once

#include <Eigen/Dense>

namespace homflow {

/// e^{sX} for symmetric traceless X: a unit-determinant SPD matrix.
/// Throws ValidationError when X is not symmetric or not traceless (1e-14).
Eigen::MatrixXd sym_space_exp(const Eigen::MatrixXd& X, double s = 1.0);

/// Principal logarithm of a symmetric positive-definite matrix.
Eigen::MatrixXd spd_log(const Eigen::MatrixXd& G);

/// Principal power G^p of a symmetric positive-definite matrix.
Eigen::MatrixXd spd_power(const Eigen::MatrixXd& G, double p);

/// <K, K>_G = Tr(G^{-1} K G^{-1} K), the invariant metric on SL(N)/SO(N).
double sym_space_metric(const Eigen::MatrixXd& G, const Eigen::MatrixXd& K);

/// Checks the symmetric, positive-definite, unit-determinant invariants.
void check_sym_space_point(const Eigen::MatrixXd& G, double sym_tol = 1e-14, double det_tol = 1e-10);

}  // namespace homflow
