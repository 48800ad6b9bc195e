#include <cmath>
#include <vector>

#include "homflow/curvature.hpp"
#include "homflow/errors.hpp"

namespace homflow {
namespace {

Eigen::MatrixXd sample(const MetricSampler& metric, const Eigen::VectorXd& x) {
  Eigen::MatrixXd g = metric(x);
  if (g.rows() != x.size() || g.cols() != x.size()) throw ValidationError("chart metric has wrong shape");
  return g;
}

// Christoffel symbols gamma[a](b, c) at x from central differences of g.
std::vector<Eigen::MatrixXd> christoffel(const MetricSampler& metric, const Eigen::VectorXd& x, double h) {
  const auto n = x.size();
  const Eigen::MatrixXd g = sample(metric, x);
  Eigen::LDLT<Eigen::MatrixXd> ldlt(g);
  if (ldlt.info() != Eigen::Success || !(ldlt.vectorD().cwiseAbs().minCoeff() > 1e-300))
    throw DomainError("coordinate metric is singular at a sampled point");
  const Eigen::MatrixXd ginv = ldlt.solve(Eigen::MatrixXd::Identity(n, n));
  if (!ginv.allFinite()) throw DomainError("coordinate metric is singular at a sampled point");

  std::vector<Eigen::MatrixXd> dg(n);  // dg[c](a, b) = d_c g_ab
  for (Eigen::Index c = 0; c < n; ++c) {
    Eigen::VectorXd xp = x, xm = x;
    xp[c] += h;
    xm[c] -= h;
    dg[c] = (sample(metric, xp) - sample(metric, xm)) / (2.0 * h);
  }
  std::vector<Eigen::MatrixXd> gamma(n, Eigen::MatrixXd::Zero(n, n));
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = 0; b < n; ++b)
      for (Eigen::Index c = 0; c < n; ++c) {
        double s = 0.0;
        for (Eigen::Index d = 0; d < n; ++d) s += ginv(a, d) * (dg[b](d, c) + dg[c](d, b) - dg[d](b, c));
        gamma[a](b, c) = 0.5 * s;
      }
  return gamma;
}

Eigen::MatrixXd ricci_at_step(const MetricSampler& metric, const Eigen::VectorXd& x, double h) {
  const auto n = x.size();
  const auto gamma = christoffel(metric, x, h);
  // dgamma[e][a](b, c) = d_e gamma^a_bc
  std::vector<std::vector<Eigen::MatrixXd>> dgamma(n);
  for (Eigen::Index e = 0; e < n; ++e) {
    Eigen::VectorXd xp = x, xm = x;
    xp[e] += h;
    xm[e] -= h;
    const auto gp = christoffel(metric, xp, h);
    const auto gm = christoffel(metric, xm, h);
    dgamma[e].resize(n);
    for (Eigen::Index a = 0; a < n; ++a) dgamma[e][a] = (gp[a] - gm[a]) / (2.0 * h);
  }
  // R^a_{bcd} = d_c G^a_db - d_d G^a_cb + G^a_ce G^e_db - G^a_de G^e_cb;  Ric_bd = R^a_{bad}
  Eigen::MatrixXd ric = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index b = 0; b < n; ++b)
    for (Eigen::Index d = 0; d < n; ++d) {
      double s = 0.0;
      for (Eigen::Index a = 0; a < n; ++a) {
        s += dgamma[a][a](d, b) - dgamma[d][a](a, b);
        for (Eigen::Index e = 0; e < n; ++e) s += gamma[a](a, e) * gamma[e](d, b) - gamma[a](d, e) * gamma[e](a, b);
      }
      ric(b, d) = s;
    }
  return 0.5 * (ric + ric.transpose());
}

}  // namespace

Eigen::MatrixXd coordinate_ricci_oracle(const MetricSampler& metric, const Eigen::VectorXd& point,
                                        const OracleOptions& opt) {
  if (!(opt.step > 0.0)) throw ValidationError("oracle step must be positive");
  const Eigen::MatrixXd coarse = ricci_at_step(metric, point, opt.step);
  if (!opt.richardson) return coarse;
  const Eigen::MatrixXd fine = ricci_at_step(metric, point, 0.5 * opt.step);
  return (4.0 * fine - coarse) / 3.0;
}

}  // namespace homflow
