#include "myller/trajectory_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace myller {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  // prefer the shortest representation that still round-trips
  for (int prec = 1; prec < 17; ++prec) {
    char shorter[40];
    std::snprintf(shorter, sizeof shorter, "%.*g", prec, v);
    if (std::strtod(shorter, nullptr) == v) return shorter;
  }
  return buf;
}

static const char* kCsvHeader =
    "s,rx,ry,rz,e1x,e1y,e1z,e2x,e2y,e2z,e3x,e3y,e3z";

void export_trajectory_csv(const FrameTrajectory& traj, std::ostream& out) {
  out << kCsvHeader << "\n";
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const FramePose& p = traj.poses[i];
    double cols[13] = {traj.grid[i],
                       p.r.x(),  p.r.y(),  p.r.z(),
                       p.e1.x(), p.e1.y(), p.e1.z(),
                       p.e2.x(), p.e2.y(), p.e2.z(),
                       p.e3.x(), p.e3.y(), p.e3.z()};
    for (int c = 0; c < 13; ++c) {
      if (c) out << ',';
      out << format_double(cols[c]);
    }
    out << "\n";
  }
}

void export_trajectory_json(const FrameTrajectory& traj, std::ostream& out) {
  nlohmann::ordered_json j;
  j["frame"] = traj.kind == FrameKind::Frenet ? "frenet" : "darboux";
  auto vec = [](const Vec3& v) { return nlohmann::json::array({v.x(), v.y(), v.z()}); };
  nlohmann::json points = nlohmann::json::array();
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const FramePose& p = traj.poses[i];
    points.push_back({{"s", traj.grid[i]},
                      {"r", vec(p.r)},
                      {"e1", vec(p.e1)},
                      {"e2", vec(p.e2)},
                      {"e3", vec(p.e3)}});
  }
  j["points"] = std::move(points);
  out << j.dump(2) << "\n";
}

void export_trajectory(const FrameTrajectory& traj, const std::string& format,
                       const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  if (format == "csv") export_trajectory_csv(traj, out);
  else if (format == "json") export_trajectory_json(traj, out);
  else throw std::runtime_error("unknown trajectory format: " + format);
  if (!out) throw std::runtime_error("write failure: " + path);
}

FrameTrajectory ingest_trajectory_csv(std::istream& in, FrameKind kind,
                                      IngestReport* report) {
  FrameTrajectory traj;
  traj.kind = kind;
  std::string line;
  std::size_t lineno = 0;
  bool saw_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    if (!saw_header) {
      saw_header = true;
      continue;  // header row
    }
    std::stringstream ss(line);
    double cols[13];
    std::string cell;
    int c = 0;
    while (std::getline(ss, cell, ',')) {
      if (c >= 13)
        throw std::runtime_error("line " + std::to_string(lineno) +
                                 ": too many columns");
      char* end = nullptr;
      cols[c] = std::strtod(cell.c_str(), &end);
      if (end == cell.c_str())
        throw std::runtime_error("line " + std::to_string(lineno) +
                                 ": malformed number '" + cell + "'");
      ++c;
    }
    if (c != 13)
      throw std::runtime_error("line " + std::to_string(lineno) + ": expected 13 columns, got " +
                               std::to_string(c));
    FramePose p;
    p.r = Vec3(cols[1], cols[2], cols[3]);
    p.e1 = Vec3(cols[4], cols[5], cols[6]);
    p.e2 = Vec3(cols[7], cols[8], cols[9]);
    p.e3 = Vec3(cols[10], cols[11], cols[12]);
    double defect = p.orthonormality_defect();
    if (defect > 1e-3)
      throw std::runtime_error("line " + std::to_string(lineno) +
                               ": pose is not orthonormal (defect " +
                               std::to_string(defect) + ")");
    if (defect > 1e-6 && report)
      report->warnings.push_back("line " + std::to_string(lineno) +
                                 ": mildly non-orthonormal pose (defect " +
                                 std::to_string(defect) + ")");
    if (!traj.grid.empty() && !(cols[0] > traj.grid.back()))
      throw std::runtime_error("line " + std::to_string(lineno) +
                               ": s values must be strictly increasing");
    traj.grid.push_back(cols[0]);
    traj.poses.push_back(p);
  }
  if (traj.grid.empty()) throw std::runtime_error("trajectory file has no data rows");
  return traj;
}

FrameTrajectory ingest_trajectory(const std::string& path, FrameKind kind,
                                  IngestReport* report) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open trajectory file: " + path);
  return ingest_trajectory_csv(in, kind, report);
}

}  // namespace myller
