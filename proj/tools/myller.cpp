#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <mutex>
#include <thread>
#include <vector>

#include "myller/extraction.hpp"
#include "myller/helix.hpp"
#include "myller/scenario_io.hpp"
#include "myller/trajectory_io.hpp"

namespace {

int thread_cap() {
  if (const char* env = std::getenv("MYLLER_THREADS")) {
    int n = std::atoi(env);
    if (n > 0) return n;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

int cmd_run(const std::vector<std::string>& paths, const myller::RunOptions& opts) {
  std::size_t n = paths.size();
  std::vector<myller::RunResult> results(n);

  int workers = std::min<int>(thread_cap(), static_cast<int>(n));
  std::mutex next_mutex;
  std::size_t next = 0;
  auto worker = [&]() {
    for (;;) {
      std::size_t i;
      {
        std::lock_guard<std::mutex> lock(next_mutex);
        if (next >= n) return;
        i = next++;
      }
      try {
        myller::Scenario sc = myller::load_scenario(paths[i]);
        results[i] = myller::run_scenario(sc, opts);
      } catch (const std::exception& e) {
        results[i].exit_code = 1;
        results[i].diagnostics = std::string("error: ") + e.what() + "\n";
      }
    }
  };
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (std::thread& t : pool) t.join();
  }

  int exit_code = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!results[i].report.empty()) std::cout << results[i].report;
    if (!results[i].diagnostics.empty()) std::cerr << results[i].diagnostics;
    exit_code = std::max(exit_code, results[i].exit_code);
  }
  return exit_code;
}

int cmd_classify(const std::string& path, const std::string& frame,
                 const std::vector<std::string>& kinds,
                 const myller::ConstancyPolicy& policy) {
  using namespace myller;
  try {
    FrameKind fk;
    if (frame == "darboux") fk = FrameKind::Darboux;
    else if (frame == "frenet") fk = FrameKind::Frenet;
    else {
      std::cerr << "error: --frame must be darboux or frenet\n";
      return 1;
    }

    IngestReport ing;
    FrameTrajectory traj = ingest_trajectory(path, fk, &ing);
    for (const std::string& w : ing.warnings) std::cerr << "warning: " << w << "\n";

    DarbouxInvariants dinv;
    std::optional<FrenetInvariants> finv;
    if (fk == FrameKind::Darboux) {
      dinv = extract_darboux(traj);
    } else {
      finv = extract_frenet(traj);
      dinv = darboux_view_of_frenet(*finv);
    }

    std::cout << "trajectory: " << path << "\n";
    std::cout << "frame: " << frame << "\n";
    for (const std::string& name : kinds) {
      auto kind = helix_kind_from_name(name);
      if (!kind) {
        std::cerr << "error: unknown kind '" << name << "'\n";
        return 1;
      }
      HelixVerdict v;
      if (*kind == HelixKind::Xi1) {
        if (!finv) {
          std::cerr << "error: kind xi1 needs --frame frenet\n";
          return 2;
        }
        v = classify_xi1(*finv, traj.grid, policy);
      } else if (is_w_kind(*kind)) {
        v = classify_w(*kind, dinv, traj.grid, policy);
      } else {
        v = classify(*kind, dinv, traj.grid, policy);
      }
      if (!v.undefined_region) verify_axis(traj, dinv, v);
      write_verdict(std::cout, v);
      if (v.undefined_region) {
        std::cerr << "error: " << v.note << "\n";
        return 2;
      }
    }
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Myller configuration toolkit: frame integration and helix analysis"};
  app.require_subcommand(1);

  myller::RunOptions opts;
  double step = 0.0;
  double tol_abs = opts.policy.abs_tol, tol_rel = opts.policy.rel_tol;

  auto* run = app.add_subcommand("run", "execute scenario files");
  std::vector<std::string> scenario_paths;
  run->add_option("scenarios", scenario_paths, "scenario JSON files")
      ->required()
      ->check(CLI::ExistingFile);
  run->add_option("--step", step, "override the scenario grid step");
  run->add_option("--tol-abs", tol_abs, "constancy absolute tolerance");
  run->add_option("--tol-rel", tol_rel, "constancy relative tolerance");

  auto* cls = app.add_subcommand("classify", "classify an ingested trajectory CSV");
  std::string traj_path, frame = "darboux", kinds_csv = "xi,mu,v";
  cls->add_option("trajectory", traj_path, "trajectory CSV file")
      ->required()
      ->check(CLI::ExistingFile);
  cls->add_option("--frame", frame, "frame kind: darboux|frenet");
  cls->add_option("--kinds", kinds_csv, "comma-separated helix kinds");
  cls->add_option("--tol-abs", tol_abs, "constancy absolute tolerance");
  cls->add_option("--tol-rel", tol_rel, "constancy relative tolerance");

  CLI11_PARSE(app, argc, argv);

  opts.policy.abs_tol = tol_abs;
  opts.policy.rel_tol = tol_rel;
  if (step > 0.0) opts.step = step;

  if (run->parsed()) return cmd_run(scenario_paths, opts);

  std::vector<std::string> kinds;
  std::string cur;
  for (char c : kinds_csv) {
    if (c == ',') {
      if (!cur.empty()) kinds.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) kinds.push_back(cur);
  return cmd_classify(traj_path, frame, kinds, opts.policy);
}
