#include "homflow/soliton.hpp"

#include <cmath>

#include "homflow/errors.hpp"

namespace homflow {

const SolitonSpec& soliton_catalog(const GeometryClass& cls) {
  if (!cls.soliton) throw UnsupportedError(cls.id + " has no expanding soliton limit in the catalog");
  return *cls.soliton;
}

Eigen::MatrixXd lie_derivative_diag(const std::vector<double>& weights, const FrameMetric& m, double t) {
  if (!m.is_diagonal()) throw UnsupportedError("Lie derivative of scaling fields needs a diagonal metric");
  if (static_cast<int>(weights.size()) != m.dim()) throw ValidationError("one weight per frame vector expected");
  if (!(t > 0.0)) throw ValidationError("t must be positive");
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(m.dim(), m.dim());
  for (int i = 0; i < m.dim(); ++i) l(i, i) = -2.0 * weights[i] * m(i, i) / t;
  return l;
}

Eigen::MatrixXd lie_derivative_diag(const Geometry& geo, const std::vector<double>& weights,
                                    const CoeffVector& coeffs, double t) {
  if (static_cast<int>(weights.size()) != geo.coefficient_count())
    throw ValidationError("one weight per coefficient expected");
  // Weights live on coefficients; an Einstein block shares one weight.
  std::vector<double> frame_weights = geo.frame_diagonal(weights);
  return lie_derivative_diag(frame_weights, FrameMetric::diagonal(geo.frame_diagonal(coeffs)), t);
}

ResidualReport soliton_residual(const SolitonSpec& spec, const CoeffVector& coeffs, double t) {
  const std::vector<double> diag = spec.geometry.frame_diagonal(coeffs);
  const Eigen::MatrixXd ric = ricci(spec.geometry, coeffs);
  ResidualReport r;
  r.components = ric + 0.5 * lie_derivative_diag(spec.geometry, spec.weights, coeffs, t);
  for (std::size_t i = 0; i < diag.size(); ++i) r.components(i, i) += diag[i] / (2.0 * t);
  r.max_norm = r.components.cwiseAbs().maxCoeff();
  return r;
}

ResidualReport soliton_residual(const SolitonSpec& spec, double t) {
  if (!(t > 0.0)) throw ValidationError("t must be positive");
  return soliton_residual(spec, spec.coeffs(t), t);
}

double self_similarity_defect(const std::vector<double>& weights, const std::function<CoeffVector(double)>& coeffs,
                              double t) {
  const CoeffVector gt = coeffs(t), g1 = coeffs(1.0);
  if (gt.size() != weights.size()) throw ValidationError("one weight per coefficient expected");
  double worst = 0.0;
  for (std::size_t i = 0; i < gt.size(); ++i)
    worst = std::max(worst, std::abs(gt[i] - std::pow(t, 1.0 - 2.0 * weights[i]) * g1[i]) / gt[i]);
  return worst;
}

double self_similarity_defect(const SolitonSpec& spec, double t) {
  return self_similarity_defect(spec.weights, spec.coeffs, t);
}

double flow_consistency_defect(const SolitonSpec& spec, double t) {
  const CoeffVector g = spec.coeffs(t);
  const Eigen::MatrixXd ric = ricci(spec.geometry, g);
  double worst = 0.0;
  for (int j = 0; j < spec.geometry.coefficient_count(); ++j) {
    const int a = spec.geometry.representative_frame_index(j);
    const double from_scaling = (1.0 - 2.0 * spec.weights[j]) * g[j] / t;
    const double from_flow = -2.0 * ric(a, a);
    const double scale = std::max(1.0, std::abs(from_scaling));
    worst = std::max(worst, std::abs(from_scaling - from_flow) / scale);
  }
  return worst;
}

}  // namespace homflow
