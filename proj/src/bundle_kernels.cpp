#include "homflow/bundle_kernels.hpp"

#include <Eigen/Dense>

#include "homflow/errors.hpp"

namespace homflow {
namespace {

template <int N>
inline void point_velocity(const ExtendedGrid& g, int j, double* dh, double* dG) {
  using Mat = Eigen::Matrix<double, N, N>;
  using CMap = Eigen::Map<const Mat>;
  constexpr int nn = N * N;
  const double* G = g.G.data();
  const int e = j + 2;
  const CMap Gm2(G + (e - 2) * nn), Gm1(G + (e - 1) * nn), G0(G + e * nn), Gp1(G + (e + 1) * nn),
      Gp2(G + (e + 2) * nn);
  const double inv12d = 1.0 / (12.0 * g.dalpha);
  const double inv12d2 = inv12d / g.dalpha;
  const Mat Ga = (Gm2 - 8.0 * Gm1 + 8.0 * Gp1 - Gp2) * inv12d;
  const Mat Gaa = (-Gm2 + 16.0 * Gm1 - 30.0 * G0 + 16.0 * Gp1 - Gp2) * inv12d2;
  const double* h = g.h.data();
  const double hv = h[e];
  const double ha = (h[e - 2] - 8.0 * h[e - 1] + 8.0 * h[e + 1] - h[e + 2]) * inv12d;
  const Mat S = G0.inverse() * Ga;
  dh[j] = 0.5 * (S * S).trace();
  Eigen::Map<Mat> out(dG + j * nn);
  out = (Gaa - (0.5 * ha / hv) * Ga - Ga * S) / hv;
}

template <int N>
void velocity_serial(const ExtendedGrid& g, double* dh, double* dG) {
  for (int j = 0; j < g.M; ++j) point_velocity<N>(g, j, dh, dG);
}

template <int N>
void velocity_omp(const ExtendedGrid& g, double* dh, double* dG) {
#pragma omp parallel for schedule(static)
  for (int j = 0; j < g.M; ++j) point_velocity<N>(g, j, dh, dG);
}

template <int N>
void dispatch_backend(const ExtendedGrid& g, double* dh, double* dG, Backend b) {
  if (b == Backend::OpenMP)
    velocity_omp<N>(g, dh, dG);
  else
    velocity_serial<N>(g, dh, dG);
}

}  // namespace

void bundle_velocity(const ExtendedGrid& grid, double* dh, double* dG, Backend backend) {
  switch (grid.N) {
    case 1: dispatch_backend<1>(grid, dh, dG, backend); break;
    case 2: dispatch_backend<2>(grid, dh, dG, backend); break;
    case 3: dispatch_backend<3>(grid, dh, dG, backend); break;
    case 4: dispatch_backend<4>(grid, dh, dG, backend); break;
    default: throw ConfigError("fiber dimension must be between 1 and 4");
  }
}

}  // namespace homflow
