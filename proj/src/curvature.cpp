#include "homflow/curvature.hpp"

#include <algorithm>
#include <cmath>

#include "homflow/errors.hpp"

namespace homflow {

FrameMetric::FrameMetric(Eigen::MatrixXd g) : g_(std::move(g)) {
  if (g_.rows() != g_.cols() || g_.rows() == 0) throw ValidationError("frame metric must be square");
  const double scale = g_.cwiseAbs().maxCoeff();
  if (!((g_ - g_.transpose()).cwiseAbs().maxCoeff() <= 1e-14 * std::max(1.0, scale)))
    throw ValidationError("frame metric is not symmetric");
  Eigen::LLT<Eigen::MatrixXd> llt(g_);
  if (llt.info() != Eigen::Success) throw ValidationError("frame metric is not positive definite");
  ginv_ = llt.solve(Eigen::MatrixXd::Identity(g_.rows(), g_.cols()));
  diagonal_ = (g_ - Eigen::MatrixXd(g_.diagonal().asDiagonal())).cwiseAbs().maxCoeff() == 0.0;
  if (diagonal_) ginv_ = g_.diagonal().cwiseInverse().asDiagonal();
}

FrameMetric FrameMetric::diagonal(const std::vector<double>& entries) {
  Eigen::VectorXd d(static_cast<Eigen::Index>(entries.size()));
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (!(entries[i] > 0.0) || !std::isfinite(entries[i]))
      throw ValidationError("diagonal metric entries must be positive and finite");
    d[static_cast<Eigen::Index>(i)] = entries[i];
  }
  return FrameMetric(Eigen::MatrixXd(d.asDiagonal()));
}

Tensor3 connection(const StructureConstants& sc, const FrameMetric& m) {
  const int n = sc.dim();
  if (m.dim() != n) throw ValidationError("metric and structure constants differ in dimension");
  // bracket(a, b, c) = <[X_a, X_b], X_c>
  Tensor3 br(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        double s = 0.0;
        for (int q = 0; q < n; ++q) s += sc(q, a, b) * m(q, c);
        br(a, b, c) = s;
      }
  // Koszul: 2<nabla_i X_j, X_k> = <[i,j],k> - <[j,k],i> + <[k,i],j>
  Tensor3 gamma(n);
  const Eigen::MatrixXd& ginv = m.inverse();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const double lower = 0.5 * (br(i, j, k) - br(j, k, i) + br(k, i, j));
        if (lower == 0.0) continue;
        for (int l = 0; l < n; ++l) gamma(l, i, j) += ginv(l, k) * lower;
      }
  return gamma;
}

namespace {

Tensor4 riemann_from(const StructureConstants& sc, const Tensor3& gam) {
  const int n = sc.dim();
  Tensor4 r(n);
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          double s = 0.0;
          for (int q = 0; q < n; ++q)
            s += gam(q, j, k) * gam(l, i, q) - gam(q, i, k) * gam(l, j, q) - sc(q, i, j) * gam(l, q, k);
          r(l, i, j, k) = s;
        }
  return r;
}

Eigen::MatrixXd ricci_from(const Tensor4& r) {
  const int n = r.dim();
  Eigen::MatrixXd ric = Eigen::MatrixXd::Zero(n, n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i) ric(j, k) += r(i, i, j, k);
  return ric;
}

Eigen::MatrixXd sectional_from(const Tensor4& r, const Eigen::MatrixXd& g) {
  const int n = r.dim();
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      double num = 0.0;
      for (int l = 0; l < n; ++l) num += r(l, i, j, j) * g(l, i);
      K(i, j) = num / (g(i, i) * g(j, j) - g(i, j) * g(i, j));
    }
  return K;
}

// Ricci without materializing the Riemann tensor.
Eigen::MatrixXd ricci_direct(const StructureConstants& sc, const Tensor3& gam) {
  const int n = sc.dim();
  std::vector<double> trace(n, 0.0);  // sum_i gamma(i, i, m)
  for (int q = 0; q < n; ++q)
    for (int i = 0; i < n; ++i) trace[q] += gam(i, i, q);
  Eigen::MatrixXd ric = Eigen::MatrixXd::Zero(n, n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      double s = 0.0;
      for (int q = 0; q < n; ++q) {
        s += gam(q, j, k) * trace[q];
        for (int i = 0; i < n; ++i) s -= gam(q, i, k) * gam(i, j, q) + sc(q, i, j) * gam(i, q, k);
      }
      ric(j, k) = s;
    }
  return ric;
}

// Constant-curvature or complex-hyperbolic block with metric lambda * I in a
// g0-orthonormal frame (e1, Je1, e2, Je2, ... for the Kahler case).
Tensor4 einstein_riemann(const EinsteinSpace& e, double lambda) {
  const int n = e.dim;
  Tensor4 r(n);
  const Eigen::MatrixXd g = lambda * Eigen::MatrixXd::Identity(n, n);
  if (!e.kahler) {
    if (n < 2) return r;
    const double K = -e.einstein_constant / ((n - 1) * lambda);
    for (int l = 0; l < n; ++l)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k)
            r(l, i, j, k) = K * (g(j, k) * (l == i) - g(i, k) * (l == j));
    return r;
  }
  if (n % 2 != 0) throw ValidationError("Kahler factor needs even dimension");
  const int cn = n / 2;
  const double H = -2.0 * e.einstein_constant / ((cn + 1) * lambda);
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);  // J e_{2a} = e_{2a+1}
  for (int a = 0; a < cn; ++a) {
    J(2 * a + 1, 2 * a) = 1.0;
    J(2 * a, 2 * a + 1) = -1.0;
  }
  // R(X,Y)Z = H/4 (<Y,Z>X - <X,Z>Y + <JY,Z>JX - <JX,Z>JY + 2<X,JY>JZ)
  const Eigen::MatrixXd gJ = g * J;  // gJ(a, b) = <e_a, J e_b>
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) {
          const double v = g(j, k) * (l == i) - g(i, k) * (l == j) + gJ(k, j) * J(l, i) -
                           gJ(k, i) * J(l, j) + 2.0 * gJ(i, j) * J(l, k);
          r(l, i, j, k) = 0.25 * H * v;
        }
  return r;
}

}  // namespace

Tensor4 riemann(const StructureConstants& sc, const FrameMetric& m) {
  return riemann_from(sc, connection(sc, m));
}

Eigen::MatrixXd sectional(const StructureConstants& sc, const FrameMetric& m) {
  return sectional_from(riemann(sc, m), m.matrix());
}

Eigen::MatrixXd ricci(const StructureConstants& sc, const FrameMetric& m) {
  return ricci_direct(sc, connection(sc, m));
}

CurvatureReport curvature_report(const StructureConstants& sc, const FrameMetric& m) {
  CurvatureReport rep;
  rep.connection = connection(sc, m);
  rep.riemann = riemann_from(sc, *rep.connection);
  rep.sectional = sectional_from(rep.riemann, m.matrix());
  rep.ricci = ricci_from(rep.riemann);
  rep.scalar = (m.inverse().cwiseProduct(rep.ricci)).sum();
  return rep;
}

CurvatureReport curvature_report(const Geometry& geo, const CoeffVector& coeffs) {
  const int n = geo.dim();
  const std::vector<double> diag = geo.frame_diagonal(coeffs);
  const FrameMetric full = FrameMetric::diagonal(diag);
  CurvatureReport rep;
  rep.riemann = Tensor4(n);
  bool all_lie = true;
  Tensor3 conn(n);
  for (std::size_t f = 0; f < geo.factors().size(); ++f) {
    const Factor& fac = geo.factors()[f];
    const int o = geo.frame_offset(f);
    const int d = fac.dim();
    Tensor4 block;
    if (const auto* sc = std::get_if<StructureConstants>(&fac.model)) {
      const FrameMetric m = FrameMetric::diagonal(std::vector<double>(diag.begin() + o, diag.begin() + o + d));
      const Tensor3 gam = connection(*sc, m);
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b)
          for (int c = 0; c < d; ++c) conn(o + a, o + b, o + c) = gam(a, b, c);
      block = riemann_from(*sc, gam);
    } else {
      all_lie = false;
      block = einstein_riemann(std::get<EinsteinSpace>(fac.model), diag[o]);
    }
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b)
        for (int c = 0; c < d; ++c)
          for (int e = 0; e < d; ++e) rep.riemann(o + a, o + b, o + c, o + e) = block(a, b, c, e);
  }
  if (all_lie) rep.connection = std::move(conn);
  rep.sectional = sectional_from(rep.riemann, full.matrix());
  rep.ricci = ricci_from(rep.riemann);
  rep.scalar = (full.inverse().cwiseProduct(rep.ricci)).sum();
  return rep;
}

Eigen::MatrixXd ricci(const Geometry& geo, const CoeffVector& coeffs) {
  const int n = geo.dim();
  const std::vector<double> diag = geo.frame_diagonal(coeffs);
  Eigen::MatrixXd ric = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t f = 0; f < geo.factors().size(); ++f) {
    const Factor& fac = geo.factors()[f];
    const int o = geo.frame_offset(f);
    const int d = fac.dim();
    if (const auto* sc = std::get_if<StructureConstants>(&fac.model)) {
      const FrameMetric m = FrameMetric::diagonal(std::vector<double>(diag.begin() + o, diag.begin() + o + d));
      ric.block(o, o, d, d) = ricci(*sc, m);
    } else {
      if (!(diag[o] > 0.0)) throw ValidationError("Einstein factor scale must be positive");
      // Ric(lambda g0) = Ric(g0) = -c g0 for every scale lambda.
      ric.block(o, o, d, d) = -std::get<EinsteinSpace>(fac.model).einstein_constant *
                              Eigen::MatrixXd::Identity(d, d);
    }
  }
  return ric;
}

double max_abs_sectional(const Geometry& geo, const CoeffVector& coeffs) {
  return curvature_report(geo, coeffs).sectional.cwiseAbs().maxCoeff();
}

double bianchi_residual(const Tensor4& r) {
  const int n = r.dim();
  double worst = 0.0;
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          worst = std::max(worst, std::abs(r(l, i, j, k) + r(l, j, k, i) + r(l, k, i, j)));
  return worst;
}

}  // namespace homflow
