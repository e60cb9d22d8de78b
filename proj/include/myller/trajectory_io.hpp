#ifndef MYLLER_TRAJECTORY_IO_HPP
#define MYLLER_TRAJECTORY_IO_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "myller/model.hpp"

namespace myller {

/// CSV columns, in order:
///   s, rx, ry, rz, e1x, e1y, e1z, e2x, e2y, e2z, e3x, e3y, e3z
/// Header row included; values at full double precision.
void export_trajectory_csv(const FrameTrajectory& traj, std::ostream& out);
void export_trajectory_json(const FrameTrajectory& traj, std::ostream& out);
void export_trajectory(const FrameTrajectory& traj, const std::string& format,
                       const std::string& path);

struct IngestReport {
  std::vector<std::string> warnings;  // mildly non-orthonormal poses, etc.
};

/// Read a trajectory back from the CSV schema above. Poses are not
/// re-orthonormalized: defects beyond 1e-6 warn, beyond 1e-3 fail.
FrameTrajectory ingest_trajectory_csv(std::istream& in, FrameKind kind,
                                      IngestReport* report = nullptr);
FrameTrajectory ingest_trajectory(const std::string& path, FrameKind kind,
                                  IngestReport* report = nullptr);

std::string format_double(double v);  // shortest round-trippable decimal

}  // namespace myller

#endif
