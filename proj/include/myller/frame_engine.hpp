#ifndef MYLLER_FRAME_ENGINE_HPP
#define MYLLER_FRAME_ENGINE_HPP

#include "myller/model.hpp"

namespace myller {

struct IntegratorConfig {
  double step = 1e-3;              // max internal RK4 step (arclength)
  int reorthonormalize_every = 1;  // modified Gram-Schmidt cadence, in steps
};

/// Advance the Darboux frame along its moving equations:
///   xi' = G mu + K v,  mu' = -G xi + T v,  v' = -K xi - T mu,
///   r'  = c1 xi + c2 mu + c3 v.
FrameTrajectory integrate_darboux(const DarbouxInvariants& inv,
                                  const FramePose& initial,
                                  const std::vector<double>& grid,
                                  const IntegratorConfig& cfg = {});

/// Advance the Frenet-type frame:
///   xi1' = K1 xi2,  xi2' = -K1 xi1 + K2 xi3,  xi3' = -K2 xi2,
///   r'   = a1 xi1 + a2 xi2 + a3 xi3.
FrameTrajectory integrate_frenet(const FrenetInvariants& inv,
                                 const FramePose& initial,
                                 const std::vector<double>& grid,
                                 const IntegratorConfig& cfg = {});

/// Convert Frenet-type invariants to Darboux invariants through the
/// angle psi between xi2 and v:
///   G = (sin psi) K1,  K = (cos psi) K1,  T = K2 + psi',
///   c1 = a1,  c2 = (sin psi) a2 - (cos psi) a3,  c3 = (cos psi) a2 + (sin psi) a3.
DarbouxInvariants darboux_from_frenet(const FrenetInvariants& inv,
                                      const ScalarFunc& psi);

/// Rotate a Frenet-kind trajectory into the Darboux frame:
///   xi = xi1,  mu = (sin psi) xi2 - (cos psi) xi3,  v = (cos psi) xi2 + (sin psi) xi3.
FrameTrajectory frames_from_frenet_frames(const FrameTrajectory& traj_F,
                                          const ScalarFunc& psi);

struct RigidMotion {
  Mat3 rotation = Mat3::Identity();
  Vec3 translation = Vec3::Zero();
  double rms = 0.0;
  bool degenerate = false;  // all points coincident; identity rotation returned
};

/// Best proper rigid motion (det = +1) mapping curve B onto curve A in
/// least squares over curve points. Both trajectories must share a grid.
RigidMotion align_trajectories(const FrameTrajectory& a, const FrameTrajectory& b);

}  // namespace myller

#endif
