#pragma once

#include <vector>

namespace homflow {

enum class Backend { Serial, OpenMP };

/// Periodic grid data with two ghost cells on each side. Extended index e = j + 2;
/// ghost fiber metrics carry the holonomy twist, h is plainly periodic.
struct ExtendedGrid {
  int M = 0;
  int N = 0;
  double dalpha = 0.0;
  std::vector<double> h;  // M + 4
  std::vector<double> G;  // (M + 4) * N * N, each block column-major
};

/// Pointwise flow velocities on the circle base:
///   dh[j] = 1/2 Tr((G^{-1} G')^2)
///   dG[j] = h^{-1} (G'' - 1/2 h^{-1} h' G' - G' G^{-1} G')
/// with fourth-order central differences. dG is also the harmonic-map residual
/// and 1/2 dh the fiber energy density term of the base equation.
/// Serial and OpenMP backends perform identical per-point arithmetic.
void bundle_velocity(const ExtendedGrid& grid, double* dh, double* dG, Backend backend);

}  // namespace homflow
