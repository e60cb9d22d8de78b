#ifndef MYLLER_MODEL_HPP
#define MYLLER_MODEL_HPP

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "myller/scalar_func.hpp"

namespace myller {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

enum class FrameKind { Frenet, Darboux };

/// Invariants of the Frenet-type frame: curvature K1 > 0, torsion K2,
/// and the tangent direction cosines (a1, a2, a3), unit-norm.
struct FrenetInvariants {
  ScalarFunc K1, K2, a1, a2, a3;
};

/// Invariants of the Darboux frame: geodesic curvature G, normal
/// curvature K, geodesic torsion T, and tangent components (c1, c2, c3).
struct DarbouxInvariants {
  ScalarFunc G, K, T, c1, c2, c3;
};

/// Curve point plus positively oriented orthonormal triple.
/// Darboux: (e1,e2,e3) = (xi, mu, v). Frenet: (xi1, xi2, xi3).
struct FramePose {
  Vec3 r = Vec3::Zero();
  Vec3 e1 = Vec3::UnitX();
  Vec3 e2 = Vec3::UnitY();
  Vec3 e3 = Vec3::UnitZ();

  Mat3 frame() const {
    Mat3 m;
    m.col(0) = e1;
    m.col(1) = e2;
    m.col(2) = e3;
    return m;
  }

  /// max |E^T E - I| entry
  double orthonormality_defect() const {
    Mat3 e = frame();
    return (e.transpose() * e - Mat3::Identity()).cwiseAbs().maxCoeff();
  }

  bool orthonormal(double tol = 1e-9) const {
    return orthonormality_defect() <= tol && frame().determinant() > 0.0;
  }
};

struct FrameTrajectory {
  FrameKind kind = FrameKind::Darboux;
  std::vector<double> grid;       // strictly increasing s
  std::vector<FramePose> poses;   // one per grid point

  std::size_t size() const { return grid.size(); }
};

enum class HelixKind { Xi, Mu, V, Xi1, Wn, Wr, Wo };

const char* helix_kind_name(HelixKind k);
std::optional<HelixKind> helix_kind_from_name(const std::string& name);
bool is_w_kind(HelixKind k);
/// Wn -> Xi, Wr -> Mu, Wo -> V; identity otherwise.
HelixKind dual_kind(HelixKind k);

struct Residuals {
  double sigma_spread = 0.0;
  double axis_drift = 0.0;
  double angle_spread = 0.0;
};

struct HelixVerdict {
  HelixKind kind = HelixKind::Xi;
  std::vector<double> grid;          // interior grid the series is sampled on
  std::vector<double> sigma_series;  // sigma (or K2/K1 for xi1, or cot-dual for W kinds)
  bool is_helix = false;
  bool undefined_region = false;     // degenerate invariant pair somewhere
  std::string note;
  double sigma_median = 0.0;
  double sigma_spread = 0.0;
  double cone_angle = 0.0;           // radians, (0, pi/2] for frame-vector kinds
  Vec3 axis_frame = Vec3::Zero();    // moving-frame coords at the reference point
  std::optional<Vec3> axis_world;
  Residuals residuals;
};

struct OutputTarget {
  std::string what;    // "trajectory" | "report" | "sigma"
  std::string path;
  std::string format;  // "csv" | "json" | "text"
};

struct Scenario {
  std::string name;
  FrameKind frame_kind = FrameKind::Darboux;
  std::optional<FrenetInvariants> frenet;
  std::optional<DarbouxInvariants> darboux;
  std::optional<ScalarFunc> psi;
  double s_start = 0.0, s_end = 1.0, step = 1e-3;
  FramePose initial_pose;
  std::vector<HelixKind> analyses;
  std::vector<OutputTarget> outputs;

  std::vector<double> make_grid() const;
};

/// Check all scenario-level invariants on the grid. Empty result means valid.
std::vector<std::string> validate(const Scenario& sc);

}  // namespace myller

#endif
