#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <algorithm>
#include <vector>

#include <omp.h>

#include "homflow/bundle.hpp"
#include "homflow/bundle_kernels.hpp"

using namespace homflow;

namespace {

double time_kernel(const ExtendedGrid& grid, Backend b, int reps) {
  const std::size_t n = static_cast<std::size_t>(grid.M) * grid.N * grid.N;
  std::vector<double> dh(static_cast<std::size_t>(grid.M)), dG(n);
  bundle_velocity(grid, dh.data(), dG.data(), b);
  const auto start = std::chrono::steady_clock::now();
  for (int r = 0; r < reps; ++r) bundle_velocity(grid, dh.data(), dG.data(), b);
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() / reps;
}

}  // namespace

int main(int argc, char** argv) {
  int reps = 200;
  if (argc > 1) reps = std::atoi(argv[1]);
  std::printf("threads %d\n", omp_get_max_threads());
  std::printf("%4s %8s %14s %14s %8s %s\n", "N", "M", "serial_s", "openmp_s", "speedup", "identical");
  for (int N : {2, 3, 4}) {
    for (int M : {256, 4096, 65536}) {
      BundleSeed seed;
      seed.kind = SeedKind::Fourier;
      seed.seed = 5;
      const BundleState s = make_bundle_state(N, M, Eigen::MatrixXd::Identity(N, N), 1.0, seed);
      const ExtendedGrid grid = extend(s);
      const int r = std::max(1, reps * 256 / M);
      const double ts = time_kernel(grid, Backend::Serial, r);
      const double tp = time_kernel(grid, Backend::OpenMP, r);

      const std::size_t n = static_cast<std::size_t>(M) * N * N;
      std::vector<double> h1(static_cast<std::size_t>(M)), h2(h1), g1(n), g2(n);
      bundle_velocity(grid, h1.data(), g1.data(), Backend::Serial);
      bundle_velocity(grid, h2.data(), g2.data(), Backend::OpenMP);
      const bool same = std::memcmp(h1.data(), h2.data(), h1.size() * sizeof(double)) == 0 &&
                        std::memcmp(g1.data(), g2.data(), g1.size() * sizeof(double)) == 0;
      std::printf("%4d %8d %14.6e %14.6e %8.2f %s\n", N, M, ts, tp, ts / tp, same ? "yes" : "no");
    }
  }
  return 0;
}
