#pragma once

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "homflow/curvature.hpp"

namespace oracle {

// Columns are the frame vectors X_i expressed in chart coordinates.
using FrameField = std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>;

inline homflow::MetricSampler chart_metric(FrameField frame, std::vector<double> diag) {
  return [frame, diag](const Eigen::VectorXd& p) {
    const Eigen::MatrixXd Einv = frame(p).inverse();
    Eigen::VectorXd d(static_cast<Eigen::Index>(diag.size()));
    for (std::size_t i = 0; i < diag.size(); ++i) d(static_cast<Eigen::Index>(i)) = diag[i];
    return Eigen::MatrixXd(Einv.transpose() * d.asDiagonal() * Einv);
  };
}

// Ricci in the frame from finite differences of the chart metric.
inline Eigen::MatrixXd frame_ricci(const FrameField& frame, const std::vector<double>& diag, const Eigen::VectorXd& p) {
  homflow::OracleOptions opt;
  opt.step = 1e-3;
  opt.richardson = true;
  const Eigen::MatrixXd ric = homflow::coordinate_ricci_oracle(chart_metric(frame, diag), p, opt);
  const Eigen::MatrixXd E = frame(p);
  return E.transpose() * ric * E;
}

// [X2, X3] = -X1 with X1 = dz, X2 = dx, X3 = dy - x dz.
inline Eigen::MatrixXd nil3_frame(const Eigen::VectorXd& p) {
  Eigen::MatrixXd E(3, 3);
  E << 0.0, 1.0, 0.0,  //
      0.0, 0.0, 1.0,   //
      1.0, 0.0, -p(0);
  return E;
}

// [X2, X3] = X1, [X1, X2] = -X3: X2 = dz, X1 +- X3 = e^{+-z} (dx or dy).
inline Eigen::MatrixXd sol3_frame(const Eigen::VectorXd& p) {
  const double ez = std::exp(p(2));
  Eigen::MatrixXd E(3, 3);
  E << 0.5 * ez, 0.0, 0.5 * ez,  //
      0.5 / ez, 0.0, -0.5 / ez,  //
      0.0, 1.0, 0.0;
  return E;
}

// [X2, X3] = X1, [X3, X1] = X2: X3 = d theta rotating X1, X2.
inline Eigen::MatrixXd isom_r2_frame(const Eigen::VectorXd& p) {
  const double c = std::cos(p(2)), s = std::sin(p(2));
  Eigen::MatrixXd E(3, 3);
  E << c, -s, 0.0,  //
      s, c, 0.0,    //
      0.0, 0.0, 1.0;
  return E;
}

inline std::vector<double> random_diag(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(std::log(0.3), std::log(3.0));
  std::vector<double> d(static_cast<std::size_t>(n));
  for (auto& v : d) v = std::exp(u(rng));
  return d;
}

}  // namespace oracle
