#include "myller/extraction.hpp"

#include <cmath>
#include <stdexcept>

namespace myller {

namespace {

bool grid_uniform(const std::vector<double>& g) {
  double h = g[1] - g[0];
  for (std::size_t i = 1; i + 1 < g.size(); ++i)
    if (std::fabs((g[i + 1] - g[i]) - h) > 1e-9 * std::max(1.0, std::fabs(h)))
      return false;
  return true;
}

template <bool Parallel>
std::vector<Vec3> derivative_series_impl(const std::vector<double>& grid,
                                         const std::vector<Vec3>& y) {
  std::size_t n = grid.size();
  if (n != y.size() || n < 5)
    throw std::invalid_argument("derivative_series needs >= 5 matching points");
  std::vector<Vec3> d(n);
  if (grid_uniform(grid)) {
    double h = grid[1] - grid[0];
    d[0] = (-3.0 * y[0] + 4.0 * y[1] - y[2]) / (2.0 * h);
    d[1] = (y[2] - y[0]) / (2.0 * h);
#pragma omp parallel for if (Parallel)
    for (long i = 2; i < static_cast<long>(n) - 2; ++i)
      d[i] = (-y[i + 2] + 8.0 * y[i + 1] - 8.0 * y[i - 1] + y[i - 2]) / (12.0 * h);
    d[n - 2] = (y[n - 1] - y[n - 3]) / (2.0 * h);
    d[n - 1] = (3.0 * y[n - 1] - 4.0 * y[n - 2] + y[n - 3]) / (2.0 * h);
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t j = std::min(std::max<std::size_t>(i, 1), n - 2);
      double h0 = grid[j] - grid[j - 1], h1 = grid[j + 1] - grid[j];
      double x = grid[i];
      // derivative of the parabola through (j-1, j, j+1) at x
      double x0 = grid[j - 1], x1 = grid[j], x2 = grid[j + 1];
      Vec3 l0 = y[j - 1] * ((2.0 * x - x1 - x2) / (h0 * (h0 + h1)));
      Vec3 l1 = y[j] * ((2.0 * x - x0 - x2) / (-h0 * h1));
      Vec3 l2 = y[j + 1] * ((2.0 * x - x0 - x1) / (h1 * (h0 + h1)));
      d[i] = l0 + l1 + l2;
    }
  }
  return d;
}

}  // namespace

std::vector<Vec3> derivative_series(const std::vector<double>& grid,
                                    const std::vector<Vec3>& values) {
  return derivative_series_impl<true>(grid, values);
}

std::vector<Vec3> derivative_series_serial(const std::vector<double>& grid,
                                           const std::vector<Vec3>& values) {
  return derivative_series_impl<false>(grid, values);
}

namespace {

struct Columns {
  std::vector<Vec3> r, e1, e2, e3;
  std::vector<Vec3> dr, de1, de2, de3;
};

Columns difference(const FrameTrajectory& traj) {
  std::size_t n = traj.size();
  Columns c;
  c.r.resize(n);
  c.e1.resize(n);
  c.e2.resize(n);
  c.e3.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    c.r[i] = traj.poses[i].r;
    c.e1[i] = traj.poses[i].e1;
    c.e2[i] = traj.poses[i].e2;
    c.e3[i] = traj.poses[i].e3;
  }
  c.dr = derivative_series(traj.grid, c.r);
  c.de1 = derivative_series(traj.grid, c.e1);
  c.de2 = derivative_series(traj.grid, c.e2);
  c.de3 = derivative_series(traj.grid, c.e3);
  return c;
}

ScalarFunc dots(const std::vector<double>& grid, const std::vector<Vec3>& a,
                const std::vector<Vec3>& b) {
  std::vector<double> v(grid.size());
#pragma omp parallel for
  for (long i = 0; i < static_cast<long>(grid.size()); ++i) v[i] = a[i].dot(b[i]);
  return ScalarFunc::samples(grid, std::move(v));
}

}  // namespace

DarbouxInvariants extract_darboux(const FrameTrajectory& traj) {
  if (traj.kind != FrameKind::Darboux)
    throw std::invalid_argument("extract_darboux expects a Darboux-kind trajectory");
  if (traj.size() < 5) throw std::invalid_argument("trajectory grid too short (< 5 points)");
  Columns c = difference(traj);
  DarbouxInvariants out;
  out.G = dots(traj.grid, c.de1, c.e2);
  out.K = dots(traj.grid, c.de1, c.e3);
  out.T = dots(traj.grid, c.de2, c.e3);
  out.c1 = dots(traj.grid, c.dr, c.e1);
  out.c2 = dots(traj.grid, c.dr, c.e2);
  out.c3 = dots(traj.grid, c.dr, c.e3);
  return out;
}

FrenetInvariants extract_frenet(const FrameTrajectory& traj, double tol_k1) {
  if (traj.kind != FrameKind::Frenet)
    throw std::invalid_argument("extract_frenet expects a Frenet-kind trajectory");
  if (traj.size() < 5) throw std::invalid_argument("trajectory grid too short (< 5 points)");
  Columns c = difference(traj);
  std::size_t n = traj.size();

  std::vector<double> k1(n);
  for (std::size_t i = 0; i < n; ++i) k1[i] = c.de1[i].norm();
  for (std::size_t i = 0; i < n; ++i) {
    if (k1[i] < tol_k1) {
      std::size_t j = i;
      while (j + 1 < n && k1[j + 1] < tol_k1) ++j;
      throw std::runtime_error(
          "K1 below threshold on s in [" + std::to_string(traj.grid[i]) + ", " +
          std::to_string(traj.grid[j]) + "]; xi2 is undefined there");
    }
  }

  FrenetInvariants out;
  out.K1 = ScalarFunc::samples(traj.grid, std::move(k1));
  out.K2 = dots(traj.grid, c.de2, c.e3);
  out.a1 = dots(traj.grid, c.dr, c.e1);
  out.a2 = dots(traj.grid, c.dr, c.e2);
  out.a3 = dots(traj.grid, c.dr, c.e3);
  return out;
}

ScalarFunc extract_psi(const FrameTrajectory& traj_F, const FrameTrajectory& traj_D) {
  if (traj_F.size() != traj_D.size() || traj_F.size() < 4)
    throw std::invalid_argument("extract_psi requires matching grids with >= 4 points");
  std::size_t n = traj_F.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (std::fabs(traj_F.grid[i] - traj_D.grid[i]) > 1e-12)
      throw std::invalid_argument("extract_psi requires identical grids");
    if ((traj_F.poses[i].e1 - traj_D.poses[i].e1).norm() > 1e-6)
      throw std::runtime_error("frame mismatch: xi != xi1 at s=" +
                               std::to_string(traj_F.grid[i]));
  }

  std::vector<double> psi(n);
  double prev = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double sp = traj_F.poses[i].e2.dot(traj_D.poses[i].e2);  // <xi2, mu>
    double cp = traj_F.poses[i].e2.dot(traj_D.poses[i].e3);  // <xi2, v>
    double raw = std::atan2(sp, cp);
    if (i == 0) {
      psi[0] = raw;
    } else {
      // nearest-branch continuation
      double k = std::round((prev - raw) / (2.0 * M_PI));
      psi[i] = raw + 2.0 * M_PI * k;
    }
    prev = psi[i];
  }
  return ScalarFunc::samples(traj_F.grid, std::move(psi));
}

}  // namespace myller
