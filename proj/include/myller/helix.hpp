#ifndef MYLLER_HELIX_HPP
#define MYLLER_HELIX_HPP

#include "myller/model.hpp"

namespace myller {

enum class DarbouxVariant { Full, N, R, O };

/// Angular-velocity vector of the Darboux frame and its truncations,
/// expressed in moving-frame coordinates:
///   full = (T, -K, G),  n = (0, -K, G),  r = (T, 0, G),  o = (T, -K, 0).
struct DarbouxVector {
  DarbouxVariant variant = DarbouxVariant::Full;
  Vec3 components = Vec3::Zero();
  double norm = 0.0;

  bool has_unit() const { return norm > 0.0; }
  Vec3 unit() const;  // throws when norm == 0
};

DarbouxVector darboux_vector(DarbouxVariant variant, const DarbouxInvariants& inv,
                             double s);

/// "Constant" means max - min over the interior grid stays within
/// abs_tol + rel_tol * median(|sigma|).
struct ConstancyPolicy {
  double abs_tol = 1e-6;
  double rel_tol = 1e-4;
};

class DegeneratePairError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The helix-characterizing function for the frame-vector kinds.
/// Numerators use the expanded derivative forms (G'K - GK' etc.); the overall
/// sign fixes one branch of the convention:
///   xi: -[(G'K - GK') - (G^2+K^2) T] / (G^2+K^2)^{3/2}
///   mu: -[(T'G - TG') - (G^2+T^2) K] / (G^2+T^2)^{3/2}
///   v : -[(T'K - TK') + (T^2+K^2) G] / (T^2+K^2)^{3/2}
/// Throws DegeneratePairError when the relevant pair vanishes at s.
double sigma(HelixKind kind, const DarbouxInvariants& inv, double s);

/// sigma at every grid point. The OpenMP kernel; a serial reference is
/// kept alongside for testing and benchmarks.
std::vector<double> sigma_series(HelixKind kind, const DarbouxInvariants& inv,
                                 const std::vector<double>& grid);
std::vector<double> sigma_series_serial(HelixKind kind, const DarbouxInvariants& inv,
                                        const std::vector<double>& grid);

/// Decide helix membership for xi/mu/v from Darboux invariants.
HelixVerdict classify(HelixKind kind, const DarbouxInvariants& inv,
                      const std::vector<double>& grid,
                      const ConstancyPolicy& policy = {});

/// xi1-helix: constant K2/K1 over the grid (Frenet-type invariants).
HelixVerdict classify_xi1(const FrenetInvariants& inv, const std::vector<double>& grid,
                          const ConstancyPolicy& policy = {});

/// W_n/W_r/W_o-helix: verdict of the dual frame-vector kind with the
/// reciprocal cone angle (cot phi = 1/|sigma|).
HelixVerdict classify_w(HelixKind kind, const DarbouxInvariants& inv,
                        const std::vector<double>& grid,
                        const ConstancyPolicy& policy = {});

/// Axis direction in moving-frame coordinates at s, for the given cone
/// angle. The sign branch follows the sign of sigma at s so the world
/// vector stays constant, and the defining inner product is >= 0.
Vec3 axis(HelixKind kind, const DarbouxInvariants& inv, double s, double cone_angle);
Vec3 axis_xi1(const FrenetInvariants& inv, double s, double cone_angle);

/// Check a verdict against a trajectory: rebuild the world-coordinate axis
/// at every grid point, measure its drift and the spread of the angle the
/// defining vector makes with it. For non-helix verdicts the reference is
/// the best constant axis (normalized mean of the per-point candidates).
Residuals verify_axis(const FrameTrajectory& traj, const DarbouxInvariants& inv,
                      HelixVerdict& verdict);

/// Frenet-kind trajectories are checked through the (K1, 0, K2) reduction.
DarbouxInvariants darboux_view_of_frenet(const FrenetInvariants& inv);

}  // namespace myller

#endif
