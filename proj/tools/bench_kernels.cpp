// Timing comparison between the OpenMP kernels and their serial references.
#include <chrono>
#include <cstdio>
#include <random>

#include "myller/extraction.hpp"
#include "myller/helix.hpp"

using namespace myller;

namespace {

template <typename F>
double time_ms(F&& f, int reps) {
  auto t0 = std::chrono::steady_clock::now();
  for (int i = 0; i < reps; ++i) f();
  auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

}  // namespace

int main() {
  const std::size_t n = 2'000'000;
  const int reps = 5;

  std::vector<double> grid(n);
  for (std::size_t i = 0; i < n; ++i) grid[i] = 1e-3 * static_cast<double>(i);

  DarbouxInvariants inv;
  inv.G = ScalarFunc::expression("2+sin(s)");
  inv.K = ScalarFunc::expression("1+cos(2*s)/2");
  inv.T = ScalarFunc::expression("s/1000");
  inv.c1 = ScalarFunc::constant(1.0);
  inv.c2 = ScalarFunc::constant(0.0);
  inv.c3 = ScalarFunc::constant(0.0);

  double serial_ms = time_ms([&] { sigma_series_serial(HelixKind::Xi, inv, grid); }, reps);
  double omp_ms = time_ms([&] { sigma_series(HelixKind::Xi, inv, grid); }, reps);
  std::printf("sigma_series        n=%zu  serial %8.2f ms  omp %8.2f ms  speedup %.2fx\n",
              n, serial_ms, omp_ms, serial_ms / omp_ms);

  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Vec3> values(n);
  for (Vec3& v : values) v = Vec3(u(rng), u(rng), u(rng));

  serial_ms = time_ms([&] { derivative_series_serial(grid, values); }, reps);
  omp_ms = time_ms([&] { derivative_series(grid, values); }, reps);
  std::printf("derivative_series   n=%zu  serial %8.2f ms  omp %8.2f ms  speedup %.2fx\n",
              n, serial_ms, omp_ms, serial_ms / omp_ms);
  return 0;
}
