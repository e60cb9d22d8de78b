#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "myller/frame_engine.hpp"
#include "myller/scenario_io.hpp"
#include "myller/trajectory_io.hpp"

using namespace myller;

namespace {

std::vector<double> uniform_grid(double a, double b, double h) {
  std::vector<double> g;
  long n = std::lround((b - a) / h);
  for (long i = 0; i <= n; ++i) g.push_back(a + h * i);
  g.back() = b;
  return g;
}

FrameTrajectory sample_trajectory(double h = 1e-2, double end = 2.0) {
  DarbouxInvariants d;
  d.G = ScalarFunc::constant(3);
  d.K = ScalarFunc::constant(4);
  d.T = ScalarFunc::constant(5);
  d.c1 = ScalarFunc::constant(1);
  d.c2 = ScalarFunc::constant(0);
  d.c3 = ScalarFunc::constant(0);
  return integrate_darboux(d, FramePose{}, uniform_grid(0, end, h));
}

struct CommandResult {
  int exit_code = -1;
  std::string out;
};

CommandResult run_command(const std::string& cmd) {
  CommandResult r;
  FILE* p = popen((cmd + " 2>/dev/null").c_str(), "r");
  REQUIRE(p != nullptr);
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
  int status = pclose(p);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string cli_bin() {
  const char* p = std::getenv("MYLLER_BIN");
  REQUIRE(p != nullptr);
  return p;
}

std::string scenario_dir() {
  const char* p = std::getenv("MYLLER_SCENARIOS");
  REQUIRE(p != nullptr);
  return p;
}

std::string data_section(const std::string& report) {
  std::istringstream in(report);
  std::ostringstream out;
  std::string line;
  while (std::getline(in, line))
    if (line.empty() || line[0] != '#') out << line << "\n";
  return out.str();
}

std::string temp_path(const std::string& leaf) {
  return std::string("/tmp/myller_test_") + leaf;
}

}  // namespace

TEST_CASE("CSV export/ingest round trip is bit-exact") {
  auto traj = sample_trajectory();
  std::stringstream ss;
  export_trajectory_csv(traj, ss);
  auto back = ingest_trajectory_csv(ss, FrameKind::Darboux);
  REQUIRE(back.size() == traj.size());
  for (std::size_t i = 0; i < traj.size(); ++i) {
    CHECK(back.grid[i] == traj.grid[i]);
    CHECK(back.poses[i].r == traj.poses[i].r);
    CHECK(back.poses[i].e1 == traj.poses[i].e1);
    CHECK(back.poses[i].e2 == traj.poses[i].e2);
    CHECK(back.poses[i].e3 == traj.poses[i].e3);
  }
}

TEST_CASE("two-point trajectory exports as three CSV lines") {
  FrameTrajectory traj;
  traj.kind = FrameKind::Darboux;
  traj.grid = {0.0, 1.0};
  traj.poses.resize(2);
  traj.poses[1].r = Vec3(1, 0, 0);
  std::stringstream ss;
  export_trajectory_csv(traj, ss);
  int lines = 0;
  std::string line, header;
  while (std::getline(ss, line)) {
    if (lines == 0) header = line;
    ++lines;
  }
  CHECK(lines == 3);
  CHECK(header == "s,rx,ry,rz,e1x,e1y,e1z,e2x,e2y,e2z,e3x,e3y,e3z");
}

TEST_CASE("JSON export is valid and matches the grid length") {
  auto traj = sample_trajectory(1e-2, 0.5);
  std::stringstream ss;
  export_trajectory_json(traj, ss);
  std::string text = ss.str();
  // cheap structural check: one "s": entry per sample
  std::size_t count = 0, pos = 0;
  while ((pos = text.find("\"s\"", pos)) != std::string::npos) {
    ++count;
    ++pos;
  }
  CHECK(count == traj.size());
}

TEST_CASE("12-column row is rejected with its line number") {
  auto traj = sample_trajectory(1e-2, 0.2);
  std::stringstream ss;
  export_trajectory_csv(traj, ss);
  std::string text = ss.str();
  std::size_t last_comma = text.rfind(',');
  text.erase(last_comma, text.find('\n', last_comma) - last_comma);
  std::istringstream bad(text);
  CHECK_THROWS_WITH_AS(ingest_trajectory_csv(bad, FrameKind::Darboux),
                       doctest::Contains("line"), std::runtime_error);
}

TEST_CASE("mild frame noise is accepted with a warning") {
  auto traj = sample_trajectory(1e-2, 0.5);
  traj.poses[10].e1 += 5e-6 * traj.poses[10].e1;
  std::stringstream ss;
  export_trajectory_csv(traj, ss);
  IngestReport report;
  auto back = ingest_trajectory_csv(ss, FrameKind::Darboux, &report);
  CHECK(back.size() == traj.size());
  CHECK_FALSE(report.warnings.empty());
}

TEST_CASE("badly non-orthonormal pose fails ingest") {
  auto traj = sample_trajectory(1e-2, 0.5);
  traj.poses[5].e1 *= 1.01;
  std::stringstream ss;
  export_trajectory_csv(traj, ss);
  CHECK_THROWS(ingest_trajectory_csv(ss, FrameKind::Darboux));
}

TEST_CASE("format_double survives the strtod round trip") {
  for (double v : {0.0, 1.0, -1.0 / 3.0, 3.141592653589793, 1e-300, 12345.678901234567}) {
    std::string s = format_double(v);
    CHECK(std::strtod(s.c_str(), nullptr) == v);
  }
}

TEST_CASE("run_scenario: constant invariants give two positive verdicts") {
  Scenario sc = load_scenario(scenario_dir() + "/helix_xi_wn.json");
  auto res = run_scenario(sc);
  CHECK(res.exit_code == 0);
  CHECK(res.report.find("[analysis xi]") != std::string::npos);
  CHECK(res.report.find("[analysis wn]") != std::string::npos);
  std::size_t count = 0, pos = 0;
  while ((pos = res.report.find("is_helix: true", pos)) != std::string::npos) {
    ++count;
    ++pos;
  }
  CHECK(count == 2);
}

TEST_CASE("run_scenario: validation failure names the violated invariant") {
  Scenario sc = load_scenario(scenario_dir() + "/invalid_tuple.json");
  auto res = run_scenario(sc);
  CHECK(res.exit_code == 1);
  CHECK(res.diagnostics.find("a not unit") != std::string::npos);
}

TEST_CASE("run_scenario: degenerate pair is a runtime failure") {
  Scenario sc = load_scenario(scenario_dir() + "/degenerate_pair.json");
  auto res = run_scenario(sc);
  CHECK(res.exit_code == 2);
  CHECK(res.diagnostics.find("degenerate pair (G,K)") != std::string::npos);
}

TEST_CASE("corrections are reported exactly once per run") {
  Scenario sc = load_scenario(scenario_dir() + "/circular_helix.json");
  auto res = run_scenario(sc);
  REQUIRE(res.exit_code == 0);
  for (const char* needle :
       {"correction: third Frenet-type row", "correction: K2 taken as",
        "correction: c2 computed as"}) {
    std::size_t count = 0, pos = 0;
    while ((pos = res.report.find(needle, pos)) != std::string::npos) {
      ++count;
      ++pos;
    }
    CHECK(count == 1);
  }
}

TEST_CASE("scenario parse errors are reported") {
  CHECK_THROWS_WITH_AS(parse_scenario_json("{", "t"), doctest::Contains("invalid JSON"),
                       std::runtime_error);
  CHECK_THROWS_WITH_AS(
      parse_scenario_json("{\"frame\":\"darboux\",\"domain\":{}}", "t"),
      doctest::Contains("invariants"), std::runtime_error);
  CHECK_THROWS_WITH_AS(parse_scenario_json("{\"frame\":\"polar\"}", "t"),
                       doctest::Contains("frame"), std::runtime_error);
}

TEST_CASE("scenario outputs write trajectory and sigma files") {
  Scenario sc = load_scenario(scenario_dir() + "/helix_xi_wn.json");
  sc.step = 0.01;
  std::string tpath = temp_path("traj.csv"), spath = temp_path("sigma.csv");
  sc.outputs = {{"trajectory", tpath, "csv"}, {"sigma", spath, "csv"}};
  auto res = run_scenario(sc);
  REQUIRE(res.exit_code == 0);

  auto back = ingest_trajectory(tpath, FrameKind::Darboux);
  CHECK(back.size() == sc.make_grid().size());

  std::ifstream sig(spath);
  std::string header;
  REQUIRE(std::getline(sig, header));
  CHECK(header == "s,sigma_xi,sigma_wn");
  std::remove(tpath.c_str());
  std::remove(spath.c_str());
}

TEST_CASE("CLI run: exit codes and determinism") {
  std::string bin = cli_bin(), dir = scenario_dir();

  auto good = run_command(bin + " run " + dir + "/helix_xi_wn.json " + dir +
                          "/circular_helix.json " + dir + "/negative_control.json");
  CHECK(good.exit_code == 0);
  CHECK(good.out.find("is_helix: false") != std::string::npos);

  auto again = run_command(bin + " run " + dir + "/helix_xi_wn.json " + dir +
                           "/circular_helix.json " + dir + "/negative_control.json");
  CHECK(data_section(good.out) == data_section(again.out));

  CHECK(run_command(bin + " run " + dir + "/invalid_tuple.json").exit_code == 1);
  CHECK(run_command(bin + " run " + dir + "/degenerate_pair.json").exit_code == 2);
  CHECK(run_command(bin + " run " + dir + "/does_not_exist.json").exit_code != 0);

  // mixed batch surfaces the worst exit code
  auto mixed = run_command(bin + " run " + dir + "/helix_xi_wn.json " + dir +
                           "/degenerate_pair.json");
  CHECK(mixed.exit_code == 2);
}

TEST_CASE("CLI run honors MYLLER_THREADS") {
  std::string cmd = "MYLLER_THREADS=1 " + cli_bin() + " run " + scenario_dir() +
                    "/helix_xi_wn.json " + scenario_dir() + "/negative_control.json";
  auto r = run_command(cmd);
  CHECK(r.exit_code == 0);
}

TEST_CASE("CLI classify works on an exported trajectory") {
  auto traj = sample_trajectory(1e-3, 5.0);
  std::string path = temp_path("classify.csv");
  export_trajectory(traj, "csv", path);

  auto r = run_command(cli_bin() + " classify " + path + " --frame darboux --kinds xi,mu,v");
  CHECK(r.exit_code == 0);
  std::size_t count = 0, pos = 0;
  while ((pos = r.out.find("is_helix: true", pos)) != std::string::npos) {
    ++count;
    ++pos;
  }
  CHECK(count == 3);
  std::remove(path.c_str());
}

TEST_CASE("CLI classify rejects a bad frame and unknown kind") {
  auto traj = sample_trajectory(1e-2, 0.5);
  std::string path = temp_path("classify_bad.csv");
  export_trajectory(traj, "csv", path);
  CHECK(run_command(cli_bin() + " classify " + path + " --frame polar").exit_code == 1);
  CHECK(run_command(cli_bin() + " classify " + path + " --kinds spiral").exit_code == 1);
  std::remove(path.c_str());
}
