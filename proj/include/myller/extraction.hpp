#ifndef MYLLER_EXTRACTION_HPP
#define MYLLER_EXTRACTION_HPP

#include "myller/model.hpp"

namespace myller {

/// Read the Darboux invariants off a sampled trajectory:
///   G = <xi', mu>, K = <xi', v>, T = <mu', v>, c_i = <r', e_i>.
/// Frame derivatives come from differencing the trajectory itself
/// (4th-order central in the interior, one-sided at the ends).
DarbouxInvariants extract_darboux(const FrameTrajectory& traj);

/// Frenet-type inverse: K1 = |xi1'|, K2 = <xi2', xi3>, a_i = <r', xi_i>.
/// Fails where K1 drops below tol_k1 (xi2 undefined there).
FrenetInvariants extract_frenet(const FrameTrajectory& traj, double tol_k1 = 1e-8);

/// Recover psi from paired trajectories over the same grid:
///   cos psi = <xi2, v>, sin psi = <xi2, mu>, unwrapped to be continuous.
/// Requires xi == xi1 pointwise within 1e-6.
ScalarFunc extract_psi(const FrameTrajectory& traj_F, const FrameTrajectory& traj_D);

/// Per-point derivative of a vector series over a grid. Uniform grids get
/// the 4th-order central stencil inside, 2nd-order one-sided at the ends;
/// non-uniform grids fall back to 3-point non-uniform differences.
std::vector<Vec3> derivative_series(const std::vector<double>& grid,
                                    const std::vector<Vec3>& values);

/// Serial reference for derivative_series; kept for testing and benchmarks.
std::vector<Vec3> derivative_series_serial(const std::vector<double>& grid,
                                           const std::vector<Vec3>& values);

}  // namespace myller

#endif
