#include "homflow/bundle_curvature.hpp"

#include <cmath>

#include "homflow/errors.hpp"

namespace homflow {
namespace {

Eigen::MatrixXd covariant_hessian(const BundleJet& j) {
  // G_{;alpha alpha} = G'' - Gamma^alpha_{alpha alpha} G', Gamma = h'/(2h).
  return j.G_aa - (0.5 * j.h_a / j.h) * j.G_a;
}

void check(const BundleJet& j) {
  if (!(j.h > 0.0)) throw ValidationError("base metric must be positive");
  const auto n = j.G.rows();
  if (j.G.cols() != n || j.G_a.rows() != n || j.G_a.cols() != n || j.G_aa.rows() != n || j.G_aa.cols() != n)
    throw ValidationError("fiber jets must be square and of equal size");
}

}  // namespace

BundleCurvature bundle_curvature(const BundleJet& j) {
  check(j);
  const int N = static_cast<int>(j.G.rows());
  const Eigen::MatrixXd Gi = j.G.inverse();
  const Eigen::MatrixXd S = Gi * j.G_a;  // g^{ik} g_{kj,alpha}
  const Eigen::MatrixXd hess = covariant_hessian(j);
  const double hi = 1.0 / j.h;

  BundleCurvature c;
  c.R_alpha_i_alpha_j = -0.5 * hi * hess + 0.25 * hi * j.G_a * Gi * j.G_a;
  c.R_fiber = Tensor4(N);
  for (int i = 0; i < N; ++i)
    for (int a = 0; a < N; ++a)
      for (int k = 0; k < N; ++k)
        for (int l = 0; l < N; ++l)
          c.R_fiber(i, a, k, l) = 0.25 * hi * (-S(i, k) * j.G_a(a, l) + S(i, l) * j.G_a(a, k));

  const Eigen::MatrixXd Gihess = Gi * hess;
  c.ricci_base = -0.5 * Gihess.trace() + 0.25 * (S * S).trace();
  c.ricci_fiber = -0.5 * hi * hess + 0.5 * hi * j.G_a * Gi * j.G_a - 0.25 * hi * S.trace() * j.G_a;
  c.fiber_trace = (Gi * c.ricci_fiber).trace();
  return c;
}

Eigen::MatrixXd bundle_ricci_from_components(const BundleJet& j) {
  const BundleCurvature c = bundle_curvature(j);
  const int N = static_cast<int>(j.G.rows());
  Eigen::MatrixXd ric = Eigen::MatrixXd::Zero(N + 1, N + 1);
  // Rbar_{alpha alpha} = sum_i R^i_{alpha i alpha}, with R^i_{alpha j alpha} = h G^{ik} R^alpha_{k alpha j}.
  const Eigen::MatrixXd Gi = j.G.inverse();
  ric(0, 0) = j.h * (Gi * c.R_alpha_i_alpha_j).trace();
  // Rbar_ij = R^alpha_{i alpha j} + sum_k R^k_{ikj}.
  for (int a = 0; a < N; ++a)
    for (int b = 0; b < N; ++b) {
      double v = c.R_alpha_i_alpha_j(a, b);
      for (int k = 0; k < N; ++k) v += c.R_fiber(k, a, k, b);
      ric(a + 1, b + 1) = v;
    }
  return ric;
}

double volume_laplacian_term(const BundleJet& j) {
  check(j);
  // With v = sqrt(det G): v'/v = Tr(S)/2 and v''/v = (Tr(G^{-1}G'') - Tr(S^2))/2 + Tr(S)^2/4.
  const Eigen::MatrixXd Gi = j.G.inverse();
  const Eigen::MatrixXd S = Gi * j.G_a;
  const double trS = S.trace();
  const double vpp = 0.5 * ((Gi * j.G_aa).trace() - (S * S).trace()) + 0.25 * trS * trS;
  const double vp = 0.5 * trS;
  return -(vpp - 0.5 * (j.h_a / j.h) * vp) / j.h;
}

Eigen::MatrixXd total_space_metric(const BundleSampler& sampler, const Eigen::VectorXd& point) {
  const BundleJet jet = sampler(point(0));
  const auto N = jet.G.rows();
  if (point.size() != N + 1) throw ValidationError("point must have 1 + N coordinates");
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(N + 1, N + 1);
  g(0, 0) = jet.h;
  g.bottomRightCorner(N, N) = jet.G;
  return g;
}

}  // namespace homflow
