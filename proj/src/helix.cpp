#include "myller/helix.hpp"

#include <algorithm>
#include <cmath>

namespace myller {

Vec3 DarbouxVector::unit() const {
  if (!has_unit()) throw std::runtime_error("zero Darboux vector has no unit version");
  return components / norm;
}

DarbouxVector darboux_vector(DarbouxVariant variant, const DarbouxInvariants& inv,
                             double s) {
  double g = inv.G(s), k = inv.K(s), t = inv.T(s);
  DarbouxVector w;
  w.variant = variant;
  switch (variant) {
    case DarbouxVariant::Full: w.components = Vec3(t, -k, g); break;
    case DarbouxVariant::N: w.components = Vec3(0.0, -k, g); break;
    case DarbouxVariant::R: w.components = Vec3(t, 0.0, g); break;
    case DarbouxVariant::O: w.components = Vec3(t, -k, 0.0); break;
  }
  w.norm = w.components.norm();
  return w;
}

namespace {

constexpr double kPairTol2 = 1e-24;  // squared norm below which a pair is degenerate

// cached invariant functions plus derivatives
struct SigmaEval {
  ScalarFunc G, K, T, Gd, Kd, Td;

  explicit SigmaEval(const DarbouxInvariants& inv)
      : G(inv.G), K(inv.K), T(inv.T),
        Gd(inv.G.derivative()), Kd(inv.K.derivative()), Td(inv.T.derivative()) {}

  double operator()(HelixKind kind, double s) const {
    double g = G(s), k = K(s), t = T(s);
    switch (kind) {
      case HelixKind::Xi: {
        double den2 = g * g + k * k;
        if (den2 < kPairTol2) throw DegeneratePairError("degenerate pair (G,K)");
        double num = (Gd(s) * k - g * Kd(s)) - den2 * t;
        return -num / (den2 * std::sqrt(den2));
      }
      case HelixKind::Mu: {
        double den2 = g * g + t * t;
        if (den2 < kPairTol2) throw DegeneratePairError("degenerate pair (G,T)");
        double num = (Td(s) * g - t * Gd(s)) - den2 * k;
        return -num / (den2 * std::sqrt(den2));
      }
      case HelixKind::V: {
        double den2 = t * t + k * k;
        if (den2 < kPairTol2) throw DegeneratePairError("degenerate pair (T,K)");
        double num = (Td(s) * k - t * Kd(s)) + den2 * g;
        return -num / (den2 * std::sqrt(den2));
      }
      default:
        throw std::invalid_argument("sigma is defined for xi, mu and v kinds");
    }
  }
};

double median_of(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double median_abs(const std::vector<double>& v) {
  std::vector<double> a(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) a[i] = std::fabs(v[i]);
  return median_of(std::move(a));
}

bool samples_backed(const DarbouxInvariants& inv) {
  return inv.G.is_samples() || inv.K.is_samples() || inv.T.is_samples();
}

std::vector<double> interior(const std::vector<double>& grid, bool trim) {
  if (!trim || grid.size() < 9) return grid;
  return {grid.begin() + 2, grid.end() - 2};
}

template <bool Parallel>
std::vector<double> sigma_series_impl(HelixKind kind, const DarbouxInvariants& inv,
                                      const std::vector<double>& grid) {
  SigmaEval ev(inv);
  std::vector<double> out(grid.size());
  std::string degenerate_msg;
#pragma omp parallel for if (Parallel)
  for (long i = 0; i < static_cast<long>(grid.size()); ++i) {
    try {
      out[i] = ev(kind, grid[i]);
    } catch (const std::exception& e) {
#pragma omp critical
      degenerate_msg = std::string(e.what()) + " at s=" + std::to_string(grid[i]);
    }
  }
  if (!degenerate_msg.empty()) throw DegeneratePairError(degenerate_msg);
  return out;
}

double arccot_abs(double m) { return std::atan2(1.0, std::fabs(m)); }

void decide(HelixVerdict& v, const ConstancyPolicy& policy) {
  double lo = *std::min_element(v.sigma_series.begin(), v.sigma_series.end());
  double hi = *std::max_element(v.sigma_series.begin(), v.sigma_series.end());
  v.sigma_spread = hi - lo;
  v.sigma_median = median_of(v.sigma_series);
  double scale = median_abs(v.sigma_series);
  v.is_helix = v.sigma_spread <= policy.abs_tol + policy.rel_tol * scale;
  v.residuals.sigma_spread = v.sigma_spread;
}

}  // namespace

double sigma(HelixKind kind, const DarbouxInvariants& inv, double s) {
  return SigmaEval(inv)(kind, s);
}

std::vector<double> sigma_series(HelixKind kind, const DarbouxInvariants& inv,
                                 const std::vector<double>& grid) {
  return sigma_series_impl<true>(kind, inv, grid);
}

std::vector<double> sigma_series_serial(HelixKind kind, const DarbouxInvariants& inv,
                                        const std::vector<double>& grid) {
  return sigma_series_impl<false>(kind, inv, grid);
}

HelixVerdict classify(HelixKind kind, const DarbouxInvariants& inv,
                      const std::vector<double>& grid, const ConstancyPolicy& policy) {
  if (kind != HelixKind::Xi && kind != HelixKind::Mu && kind != HelixKind::V)
    throw std::invalid_argument("classify handles xi, mu and v; see classify_xi1/classify_w");
  if (!(policy.abs_tol > 0.0) || !(policy.rel_tol > 0.0))
    throw std::invalid_argument("constancy tolerances must be positive");

  HelixVerdict v;
  v.kind = kind;
  v.grid = interior(grid, samples_backed(inv));
  if (v.grid.size() < 3) throw std::invalid_argument("grid too short to classify");
  try {
    v.sigma_series = sigma_series(kind, inv, v.grid);
  } catch (const DegeneratePairError& e) {
    v.undefined_region = true;
    v.note = e.what();
    return v;
  }
  decide(v, policy);
  v.cone_angle = arccot_abs(v.sigma_median);
  if (v.is_helix) {
    double sref = v.grid[v.grid.size() / 2];
    v.axis_frame = axis(kind, inv, sref, v.cone_angle);
  }
  return v;
}

HelixVerdict classify_xi1(const FrenetInvariants& inv, const std::vector<double>& grid,
                          const ConstancyPolicy& policy) {
  HelixVerdict v;
  v.kind = HelixKind::Xi1;
  bool trim = inv.K1.is_samples() || inv.K2.is_samples();
  v.grid = interior(grid, trim);
  if (v.grid.size() < 3) throw std::invalid_argument("grid too short to classify");
  v.sigma_series.resize(v.grid.size());
  for (std::size_t i = 0; i < v.grid.size(); ++i) {
    double k1 = inv.K1(v.grid[i]);
    if (k1 <= 0.0) {
      v.undefined_region = true;
      v.note = "K1 not positive at s=" + std::to_string(v.grid[i]);
      return v;
    }
    v.sigma_series[i] = inv.K2(v.grid[i]) / k1;
  }
  decide(v, policy);
  v.cone_angle = arccot_abs(v.sigma_median);
  if (v.is_helix) {
    double sref = v.grid[v.grid.size() / 2];
    v.axis_frame = axis_xi1(inv, sref, v.cone_angle);
  }
  return v;
}

HelixVerdict classify_w(HelixKind kind, const DarbouxInvariants& inv,
                        const std::vector<double>& grid, const ConstancyPolicy& policy) {
  if (!is_w_kind(kind))
    throw std::invalid_argument("classify_w handles wn, wr and wo");
  HelixVerdict dual = classify(dual_kind(kind), inv, grid, policy);
  HelixVerdict v;
  v.kind = kind;
  v.grid = dual.grid;
  v.sigma_series = dual.sigma_series;
  v.undefined_region = dual.undefined_region;
  v.note = dual.note;
  if (v.undefined_region) return v;
  v.is_helix = dual.is_helix;
  v.sigma_median = dual.sigma_median;
  v.sigma_spread = dual.sigma_spread;
  v.residuals.sigma_spread = dual.sigma_spread;
  // cot(phi) = 1/|sigma|, i.e. phi = arctan(|sigma|); sigma == 0 means the
  // unit truncated Darboux vector is itself constant (phi = 0)
  v.cone_angle = std::atan(std::fabs(v.sigma_median));
  if (v.is_helix) {
    double sref = v.grid[v.grid.size() / 2];
    v.axis_frame = axis(kind, inv, sref, v.cone_angle);
  }
  return v;
}

namespace {

// frame-coordinate axis with explicit sigma (branch selector)
Vec3 axis_from_sigma(HelixKind kind, double g, double k, double t, double sig,
                     double cone_angle) {
  double sign = sig < 0.0 ? -1.0 : 1.0;
  switch (kind) {
    case HelixKind::Xi:
    case HelixKind::Xi1: {
      double pn = std::sqrt(g * g + k * k);
      if (pn * pn < kPairTol2) throw DegeneratePairError("degenerate pair (G,K)");
      double c = std::cos(cone_angle), lam = -sign * std::sin(cone_angle);
      return Vec3(c, lam * k / pn, -lam * g / pn);
    }
    case HelixKind::Mu: {
      double pn = std::sqrt(g * g + t * t);
      if (pn * pn < kPairTol2) throw DegeneratePairError("degenerate pair (G,T)");
      double c = std::cos(cone_angle), lam = -sign * std::sin(cone_angle);
      return Vec3(lam * t / pn, c, lam * g / pn);
    }
    case HelixKind::V: {
      double pn = std::sqrt(t * t + k * k);
      if (pn * pn < kPairTol2) throw DegeneratePairError("degenerate pair (T,K)");
      double c = std::cos(cone_angle), lam = -sign * std::sin(cone_angle);
      return Vec3(lam * t / pn, -lam * k / pn, c);
    }
    case HelixKind::Wn: {
      // same fixed direction as the xi axis, oriented along W_n
      double theta = M_PI / 2.0 - cone_angle;
      Vec3 d = axis_from_sigma(HelixKind::Xi, g, k, t, sig, theta);
      return sign * d;
    }
    case HelixKind::Wr: {
      double theta = M_PI / 2.0 - cone_angle;
      Vec3 d = axis_from_sigma(HelixKind::Mu, g, k, t, sig, theta);
      return -sign * d;
    }
    case HelixKind::Wo: {
      double theta = M_PI / 2.0 - cone_angle;
      Vec3 d = axis_from_sigma(HelixKind::V, g, k, t, sig, theta);
      return -sign * d;
    }
  }
  throw std::invalid_argument("unknown helix kind");
}

HelixKind sigma_kind_of(HelixKind kind) {
  HelixKind d = dual_kind(kind);
  return d == HelixKind::Xi1 ? HelixKind::Xi : d;
}

}  // namespace

Vec3 axis(HelixKind kind, const DarbouxInvariants& inv, double s, double cone_angle) {
  if (!(cone_angle > 0.0) && !is_w_kind(kind))
    throw std::invalid_argument("cone angle must lie in (0, pi/2]");
  double sig = sigma(sigma_kind_of(kind), inv, s);
  return axis_from_sigma(kind, inv.G(s), inv.K(s), inv.T(s), sig, cone_angle);
}

DarbouxInvariants darboux_view_of_frenet(const FrenetInvariants& inv) {
  DarbouxInvariants d;
  d.G = inv.K1;
  d.K = ScalarFunc::constant(0.0);
  d.T = inv.K2;
  d.c1 = inv.a1;
  d.c2 = inv.a2;
  d.c3 = inv.a3;
  return d;
}

Vec3 axis_xi1(const FrenetInvariants& inv, double s, double cone_angle) {
  return axis(HelixKind::Xi1, darboux_view_of_frenet(inv), s, cone_angle);
}

Residuals verify_axis(const FrameTrajectory& traj, const DarbouxInvariants& inv,
                      HelixVerdict& verdict) {
  Residuals res;
  if (verdict.undefined_region) return res;
  res.sigma_spread = verdict.sigma_spread;

  bool trim = samples_backed(inv) && traj.size() >= 9;
  std::size_t lo = trim ? 2 : 0;
  std::size_t hi = traj.size() - (trim ? 2 : 0);
  std::size_t n = hi - lo;
  if (n < 2) return res;

  HelixKind skind = sigma_kind_of(verdict.kind);
  SigmaEval ev(inv);

  std::vector<Vec3> d(n), u(n);
  std::vector<char> ok(n, 1);
#pragma omp parallel for
  for (long j = 0; j < static_cast<long>(n); ++j) {
    std::size_t i = lo + static_cast<std::size_t>(j);
    double s = traj.grid[i];
    const FramePose& p = traj.poses[i];
    Mat3 e = p.frame();
    try {
      double sig = ev(skind, s);
      double angle = is_w_kind(verdict.kind) ? std::atan(std::fabs(sig))
                                             : std::atan2(1.0, std::fabs(sig));
      d[j] = e * axis_from_sigma(verdict.kind, inv.G(s), inv.K(s), inv.T(s), sig, angle);
      switch (verdict.kind) {
        case HelixKind::Xi:
        case HelixKind::Xi1: u[j] = p.e1; break;
        case HelixKind::Mu: u[j] = p.e2; break;
        case HelixKind::V: u[j] = p.e3; break;
        case HelixKind::Wn: u[j] = e * Vec3(0, -inv.K(s), inv.G(s)).normalized(); break;
        case HelixKind::Wr: u[j] = e * Vec3(inv.T(s), 0, inv.G(s)).normalized(); break;
        case HelixKind::Wo: u[j] = e * Vec3(inv.T(s), -inv.K(s), 0).normalized(); break;
      }
    } catch (const std::exception&) {
      ok[j] = 0;
    }
  }

  // continuity of the sign branch, then orient along the defining vector
  for (std::size_t j = 1; j < n; ++j)
    if (ok[j] && ok[j - 1] && d[j].dot(d[j - 1]) < 0.0) d[j] = -d[j];
  std::size_t j0 = 0;
  while (j0 < n && !ok[j0]) ++j0;
  if (j0 == n) return res;
  if (u[j0].dot(d[j0]) < 0.0)
    for (std::size_t j = 0; j < n; ++j) d[j] = -d[j];

  Vec3 ref;
  if (verdict.is_helix) {
    ref = d[j0];
  } else {
    Vec3 mean = Vec3::Zero();
    for (std::size_t j = 0; j < n; ++j)
      if (ok[j]) mean += d[j];
    ref = mean.norm() > 1e-12 ? Vec3(mean.normalized()) : d[j0];
  }

  double drift = 0.0, amin = M_PI, amax = 0.0;
#pragma omp parallel for reduction(max : drift, amax) reduction(min : amin)
  for (long j = 0; j < static_cast<long>(n); ++j) {
    if (!ok[j]) continue;
    drift = std::max(drift, (d[j] - d[j0]).norm());
    double ca = std::clamp(u[j].dot(ref), -1.0, 1.0);
    double ang = std::acos(ca);
    amax = std::max(amax, ang);
    amin = std::min(amin, ang);
  }
  res.axis_drift = drift;
  res.angle_spread = amax > amin ? amax - amin : 0.0;

  verdict.residuals = res;
  if (verdict.is_helix) verdict.axis_world = ref;
  return res;
}

}  // namespace myller
