#include "homflow/symspace.hpp"

#include <cmath>

#include "homflow/errors.hpp"

namespace homflow {
namespace {

void require_symmetric(const Eigen::MatrixXd& A, double tol, const char* what) {
  if (A.rows() != A.cols()) throw ValidationError(std::string(what) + " must be square");
  const double scale = std::max(1.0, A.cwiseAbs().maxCoeff());
  if ((A - A.transpose()).cwiseAbs().maxCoeff() > tol * scale)
    throw ValidationError(std::string(what) + " must be symmetric");
}

Eigen::MatrixXd spectral_map(const Eigen::MatrixXd& A, double (*f)(double, double), double arg) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A);
  const Eigen::VectorXd ev = es.eigenvalues().unaryExpr([&](double x) { return f(x, arg); });
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
}

}  // namespace

Eigen::MatrixXd sym_space_exp(const Eigen::MatrixXd& X, double s) {
  require_symmetric(X, 1e-14, "generator");
  if (std::abs(X.trace()) > 1e-14 * std::max(1.0, X.cwiseAbs().maxCoeff()))
    throw ValidationError("generator must be traceless");
  Eigen::MatrixXd G = spectral_map(0.5 * (X + X.transpose()), [](double x, double a) { return std::exp(a * x); }, s);
  return 0.5 * (G + G.transpose());
}

Eigen::MatrixXd spd_log(const Eigen::MatrixXd& G) {
  require_symmetric(G, 1e-12, "matrix");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G);
  if (es.eigenvalues().minCoeff() <= 0.0) throw DomainError("matrix is not positive definite");
  return spectral_map(G, [](double x, double) { return std::log(x); }, 0.0);
}

Eigen::MatrixXd spd_power(const Eigen::MatrixXd& G, double p) {
  require_symmetric(G, 1e-12, "matrix");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G);
  if (es.eigenvalues().minCoeff() <= 0.0) throw DomainError("matrix is not positive definite");
  return spectral_map(G, [](double x, double a) { return std::pow(x, a); }, p);
}

double sym_space_metric(const Eigen::MatrixXd& G, const Eigen::MatrixXd& K) {
  require_symmetric(K, 1e-12, "tangent vector");
  const Eigen::MatrixXd S = G.ldlt().solve(K);
  return (S * S).trace();
}

void check_sym_space_point(const Eigen::MatrixXd& G, double sym_tol, double det_tol) {
  require_symmetric(G, sym_tol, "fiber metric");
  Eigen::LLT<Eigen::MatrixXd> llt(G);
  if (llt.info() != Eigen::Success) throw ValidationError("fiber metric is not positive definite");
  if (std::abs(G.determinant() - 1.0) > det_tol) throw ValidationError("fiber metric must have unit determinant");
}

}  // namespace homflow
