#include "myller/scenario_io.hpp"

#include <ctime>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "myller/extraction.hpp"
#include "myller/frame_engine.hpp"
#include "myller/trajectory_io.hpp"

namespace myller {

namespace {

using nlohmann::json;

ScalarFunc func_from_json(const json& j, const std::string& name) {
  if (j.is_string()) {
    try {
      return ScalarFunc::expression(j.get<std::string>());
    } catch (const ParseError& e) {
      throw std::runtime_error("invariant '" + name + "': " + e.what());
    }
  }
  if (j.is_number()) return ScalarFunc::constant(j.get<double>());
  if (j.is_array()) {
    std::vector<double> s, v;
    for (const json& pair : j) {
      if (!pair.is_array() || pair.size() != 2)
        throw std::runtime_error("invariant '" + name +
                                 "': samples must be [s, value] pairs");
      s.push_back(pair[0].get<double>());
      v.push_back(pair[1].get<double>());
    }
    try {
      return ScalarFunc::samples(std::move(s), std::move(v));
    } catch (const EvalError& e) {
      throw std::runtime_error("invariant '" + name + "': " + e.what());
    }
  }
  throw std::runtime_error("invariant '" + name +
                           "' must be an expression string or sample array");
}

ScalarFunc required_func(const json& m, const std::string& name) {
  if (!m.contains(name))
    throw std::runtime_error("missing invariant '" + name + "'");
  return func_from_json(m.at(name), name);
}

Vec3 vec_from_json(const json& j, const std::string& name) {
  if (!j.is_array() || j.size() != 3)
    throw std::runtime_error(name + " must be a 3-element array");
  return Vec3(j[0].get<double>(), j[1].get<double>(), j[2].get<double>());
}

}  // namespace

Scenario parse_scenario_json(const std::string& text, const std::string& origin) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw std::runtime_error(origin + ": invalid JSON: " + e.what());
  }

  Scenario sc;
  sc.name = j.value("name", origin);
  std::string frame = j.value("frame", "");
  if (frame == "darboux") sc.frame_kind = FrameKind::Darboux;
  else if (frame == "frenet") sc.frame_kind = FrameKind::Frenet;
  else throw std::runtime_error(origin + ": frame must be \"darboux\" or \"frenet\"");

  if (!j.contains("invariants") || !j["invariants"].is_object())
    throw std::runtime_error(origin + ": missing invariants object");
  const json& m = j["invariants"];
  if (sc.frame_kind == FrameKind::Darboux) {
    DarbouxInvariants d;
    d.G = required_func(m, "G");
    d.K = required_func(m, "K");
    d.T = required_func(m, "T");
    d.c1 = required_func(m, "c1");
    d.c2 = required_func(m, "c2");
    d.c3 = required_func(m, "c3");
    sc.darboux = std::move(d);
  } else {
    FrenetInvariants f;
    f.K1 = required_func(m, "K1");
    f.K2 = required_func(m, "K2");
    f.a1 = required_func(m, "a1");
    f.a2 = required_func(m, "a2");
    f.a3 = required_func(m, "a3");
    sc.frenet = std::move(f);
  }
  if (j.contains("psi")) sc.psi = func_from_json(j["psi"], "psi");

  if (!j.contains("domain"))
    throw std::runtime_error(origin + ": missing domain");
  const json& dom = j["domain"];
  sc.s_start = dom.at("start").get<double>();
  sc.s_end = dom.at("end").get<double>();
  sc.step = dom.at("step").get<double>();

  if (j.contains("initial_pose")) {
    const json& p = j["initial_pose"];
    if (p.contains("origin")) sc.initial_pose.r = vec_from_json(p["origin"], "origin");
    if (p.contains("e1")) sc.initial_pose.e1 = vec_from_json(p["e1"], "e1");
    if (p.contains("e2")) sc.initial_pose.e2 = vec_from_json(p["e2"], "e2");
    if (p.contains("e3")) sc.initial_pose.e3 = vec_from_json(p["e3"], "e3");
  }

  if (j.contains("analyses")) {
    for (const json& a : j["analyses"]) {
      auto k = helix_kind_from_name(a.get<std::string>());
      if (!k) throw std::runtime_error(origin + ": unknown analysis kind '" +
                                       a.get<std::string>() + "'");
      sc.analyses.push_back(*k);
    }
  }

  if (j.contains("outputs")) {
    for (const json& o : j["outputs"]) {
      OutputTarget t;
      t.what = o.at("what").get<std::string>();
      t.path = o.at("path").get<std::string>();
      t.format = o.value("format", t.what == "report" ? "text" : "csv");
      sc.outputs.push_back(std::move(t));
    }
  }
  return sc;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open scenario file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario_json(ss.str(), path);
}

void write_verdict(std::ostream& out, const HelixVerdict& v) {
  out << "[analysis " << helix_kind_name(v.kind) << "]\n";
  if (v.undefined_region) {
    out << "status: undefined region (" << v.note << ")\n";
    return;
  }
  out << "is_helix: " << (v.is_helix ? "true" : "false") << "\n";
  out << "sigma_median: " << format_double(v.sigma_median) << "\n";
  out << "sigma_spread: " << format_double(v.sigma_spread) << "\n";
  out << "cone_angle_rad: " << format_double(v.cone_angle) << "\n";
  out << "cone_angle_deg: " << format_double(v.cone_angle * 180.0 / M_PI) << "\n";
  if (v.is_helix) {
    out << "axis_frame: " << format_double(v.axis_frame.x()) << " "
        << format_double(v.axis_frame.y()) << " "
        << format_double(v.axis_frame.z()) << "\n";
    if (v.axis_world)
      out << "axis_world: " << format_double(v.axis_world->x()) << " "
          << format_double(v.axis_world->y()) << " "
          << format_double(v.axis_world->z()) << "\n";
  }
  out << "residual_axis_drift: " << format_double(v.residuals.axis_drift) << "\n";
  out << "residual_angle_spread: " << format_double(v.residuals.angle_spread) << "\n";
}

namespace {

void write_sigma_csv(const std::string& path,
                     const std::vector<HelixVerdict>& verdicts) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << "s";
  for (const HelixVerdict& v : verdicts) out << ",sigma_" << helix_kind_name(v.kind);
  out << "\n";
  if (verdicts.empty()) return;
  const std::vector<double>& grid = verdicts.front().grid;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    out << format_double(grid[i]);
    for (const HelixVerdict& v : verdicts)
      out << ","
          << (i < v.sigma_series.size() ? format_double(v.sigma_series[i]) : "");
    out << "\n";
  }
}

}  // namespace

RunResult run_scenario(const Scenario& scenario, const RunOptions& opts) {
  RunResult res;
  Scenario sc = scenario;
  if (opts.step) sc.step = *opts.step;

  std::vector<std::string> violations = validate(sc);
  if (!violations.empty()) {
    res.exit_code = 1;
    std::ostringstream diag;
    for (const std::string& v : violations) diag << "validation: " << v << "\n";
    res.diagnostics = diag.str();
    return res;
  }

  std::ostringstream rep;
  std::time_t now = std::time(nullptr);
  char stamp[64];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  rep << "# myller report, generated " << stamp << "\n";
  rep << "scenario: " << sc.name << "\n";
  rep << "frame: " << (sc.frame_kind == FrameKind::Frenet ? "frenet" : "darboux")
      << "\n";
  rep << "domain: start=" << format_double(sc.s_start)
      << " end=" << format_double(sc.s_end) << " step=" << format_double(sc.step)
      << "\n";

  try {
    std::vector<double> grid = sc.make_grid();
    IntegratorConfig icfg;
    icfg.step = sc.step;

    FrameTrajectory primary;          // trajectory in the scenario's own frame
    FrameTrajectory darboux_traj;     // Darboux-kind view used by xi/mu/v/w kinds
    std::optional<DarbouxInvariants> dinv;
    bool have_darboux_traj = false;

    if (sc.frame_kind == FrameKind::Darboux) {
      primary = integrate_darboux(*sc.darboux, sc.initial_pose, grid, icfg);
      darboux_traj = primary;
      dinv = *sc.darboux;
      have_darboux_traj = true;
    } else {
      primary = integrate_frenet(*sc.frenet, sc.initial_pose, grid, icfg);
      // published corrections applied on this code path
      rep << "correction: third Frenet-type row integrated as dxi3/ds = -K2*xi2 "
             "(skew-symmetric completion)\n";
      rep << "correction: K2 taken as <dxi2/ds, xi3>\n";
      if (sc.psi) {
        rep << "correction: c2 computed as (sin psi)*a2 - (cos psi)*a3\n";
        dinv = darboux_from_frenet(*sc.frenet, *sc.psi);
        darboux_traj = frames_from_frenet_frames(primary, *sc.psi);
        have_darboux_traj = true;
      }
    }

    std::vector<HelixVerdict> verdicts;
    for (HelixKind kind : sc.analyses) {
      HelixVerdict v;
      if (kind == HelixKind::Xi1) {
        if (sc.frame_kind != FrameKind::Frenet)
          throw std::runtime_error("analysis xi1 requires frenet invariants");
        v = classify_xi1(*sc.frenet, grid, opts.policy);
        DarbouxInvariants view = darboux_view_of_frenet(*sc.frenet);
        verify_axis(primary, view, v);
      } else {
        if (!dinv)
          throw std::runtime_error(
              std::string("analysis ") + helix_kind_name(kind) +
              " requires darboux invariants (frenet scenarios need psi)");
        v = is_w_kind(kind) ? classify_w(kind, *dinv, grid, opts.policy)
                            : classify(kind, *dinv, grid, opts.policy);
        if (have_darboux_traj && !v.undefined_region) verify_axis(darboux_traj, *dinv, v);
      }
      if (v.undefined_region)
        throw std::runtime_error(std::string("analysis ") + helix_kind_name(kind) +
                                 ": " + v.note);
      verdicts.push_back(std::move(v));
    }

    for (const HelixVerdict& v : verdicts) write_verdict(rep, v);

    for (const OutputTarget& t : sc.outputs) {
      if (t.what == "trajectory") {
        export_trajectory(primary, t.format, t.path);
      } else if (t.what == "sigma") {
        write_sigma_csv(t.path, verdicts);
      } else if (t.what == "report") {
        // filled in below, once the report body is complete
      } else {
        throw std::runtime_error("unknown output target: " + t.what);
      }
    }

    res.report = rep.str();
    for (const OutputTarget& t : sc.outputs) {
      if (t.what == "report") {
        std::ofstream out(t.path);
        if (!out) throw std::runtime_error("cannot open output file: " + t.path);
        out << res.report;
      }
    }
  } catch (const std::exception& e) {
    res.exit_code = 2;
    res.diagnostics = std::string("error: ") + e.what() + "\n";
    return res;
  }
  return res;
}

}  // namespace myller
