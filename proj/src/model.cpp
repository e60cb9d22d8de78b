#include "myller/model.hpp"

#include <cmath>

namespace myller {

const char* helix_kind_name(HelixKind k) {
  switch (k) {
    case HelixKind::Xi: return "xi";
    case HelixKind::Mu: return "mu";
    case HelixKind::V: return "v";
    case HelixKind::Xi1: return "xi1";
    case HelixKind::Wn: return "wn";
    case HelixKind::Wr: return "wr";
    case HelixKind::Wo: return "wo";
  }
  return "?";
}

std::optional<HelixKind> helix_kind_from_name(const std::string& name) {
  if (name == "xi") return HelixKind::Xi;
  if (name == "mu") return HelixKind::Mu;
  if (name == "v") return HelixKind::V;
  if (name == "xi1") return HelixKind::Xi1;
  if (name == "wn") return HelixKind::Wn;
  if (name == "wr") return HelixKind::Wr;
  if (name == "wo") return HelixKind::Wo;
  return std::nullopt;
}

bool is_w_kind(HelixKind k) {
  return k == HelixKind::Wn || k == HelixKind::Wr || k == HelixKind::Wo;
}

HelixKind dual_kind(HelixKind k) {
  switch (k) {
    case HelixKind::Wn: return HelixKind::Xi;
    case HelixKind::Wr: return HelixKind::Mu;
    case HelixKind::Wo: return HelixKind::V;
    default: return k;
  }
}

std::vector<double> Scenario::make_grid() const {
  std::vector<double> g;
  long n = std::lround((s_end - s_start) / step);
  if (n < 1) n = 1;
  g.reserve(static_cast<std::size_t>(n) + 1);
  for (long i = 0; i <= n; ++i) g.push_back(s_start + step * static_cast<double>(i));
  g.back() = s_end;
  return g;
}

namespace {

constexpr double kUnitTol = 1e-9;

bool eval_on_grid(const ScalarFunc& f, const std::vector<double>& grid,
                  std::vector<double>& out, std::vector<std::string>& errs,
                  const std::string& name) {
  out.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    try {
      out[i] = f(grid[i]);
    } catch (const EvalError& e) {
      errs.push_back(name + " not evaluable at s=" + std::to_string(grid[i]) +
                     ": " + e.what());
      return false;
    }
  }
  return true;
}

void check_unit_triple(const ScalarFunc& x, const ScalarFunc& y, const ScalarFunc& z,
                       const std::vector<double>& grid, const char* label,
                       std::vector<std::string>& errs) {
  std::vector<double> vx, vy, vz;
  if (!eval_on_grid(x, grid, vx, errs, label) ||
      !eval_on_grid(y, grid, vy, errs, label) ||
      !eval_on_grid(z, grid, vz, errs, label))
    return;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double n2 = vx[i] * vx[i] + vy[i] * vy[i] + vz[i] * vz[i];
    if (std::fabs(n2 - 1.0) > kUnitTol) {
      errs.push_back(std::string(label) + " not unit at s=" +
                     std::to_string(grid[i]) + " (norm^2 = " + std::to_string(n2) + ")");
      return;
    }
  }
}

}  // namespace

std::vector<std::string> validate(const Scenario& sc) {
  std::vector<std::string> errs;

  if (!(sc.s_end > sc.s_start)) errs.push_back("domain: s_end must exceed s_start");
  if (!(sc.step > 0.0)) errs.push_back("domain: step must be positive");
  if (sc.step > 0.0 && sc.s_end > sc.s_start &&
      sc.step > (sc.s_end - sc.s_start) / 10.0)
    errs.push_back("domain: step must be at most (s_end - s_start)/10");
  if (!errs.empty()) return errs;  // no usable grid

  std::vector<double> grid = sc.make_grid();

  if (!sc.initial_pose.orthonormal())
    errs.push_back("initial pose is not a positively oriented orthonormal frame");

  if (sc.frame_kind == FrameKind::Frenet) {
    if (!sc.frenet) {
      errs.push_back("frenet invariants missing");
      return errs;
    }
    const FrenetInvariants& f = *sc.frenet;
    std::vector<double> k1;
    if (eval_on_grid(f.K1, grid, k1, errs, "K1")) {
      for (std::size_t i = 0; i < grid.size(); ++i)
        if (k1[i] <= 0.0) {
          errs.push_back("K1 must be positive (K1(" + std::to_string(grid[i]) +
                         ") = " + std::to_string(k1[i]) + ")");
          break;
        }
    }
    std::vector<double> tmp;
    eval_on_grid(f.K2, grid, tmp, errs, "K2");
    check_unit_triple(f.a1, f.a2, f.a3, grid, "a", errs);
  } else {
    if (!sc.darboux) {
      errs.push_back("darboux invariants missing");
      return errs;
    }
    const DarbouxInvariants& d = *sc.darboux;
    std::vector<double> tmp;
    eval_on_grid(d.G, grid, tmp, errs, "G");
    eval_on_grid(d.K, grid, tmp, errs, "K");
    eval_on_grid(d.T, grid, tmp, errs, "T");
    check_unit_triple(d.c1, d.c2, d.c3, grid, "c", errs);
  }

  if (sc.frame_kind == FrameKind::Darboux && sc.psi)
    errs.push_back("psi is only meaningful with the frenet frame");

  return errs;
}

}  // namespace myller
