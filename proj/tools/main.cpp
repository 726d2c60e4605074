#include "anisopede/config.hpp"
#include "anisopede/diagnostics.hpp"
#include "anisopede/gronwall.hpp"
#include "anisopede/io.hpp"
#include "anisopede/lab.hpp"
#include "anisopede/monitors.hpp"
#include "anisopede/rng.hpp"
#include "anisopede/snapshot.hpp"
#include "anisopede/solver.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;
using namespace anisopede;

namespace {

void enter_workdir(const std::string& workdir) {
  if (workdir.empty()) return;
  fs::create_directories(workdir);
  fs::current_path(workdir);
}

State load_snapshot_initial(const FileConfig& fc) {
  Snapshot v1 = read_snapshot(fc.v1_path);
  Snapshot v2 = read_snapshot(fc.v2_path);
  Snapshot T = read_snapshot(fc.T_path);
  for (const Snapshot* s : {&v1, &v2, &T})
    if (!s->field.grid.same_shape(fc.solver.grid))
      throw std::runtime_error("initial snapshot grid does not match [grid]");
  if (v1.time != v2.time || v1.time != T.time)
    throw std::runtime_error("initial snapshots carry different times");
  State out;
  out.time = v1.time;
  out.v1 = std::move(v1.field);
  out.v2 = std::move(v2.field);
  out.T = std::move(T.field);
  out.v1.parity = Parity::Even;
  out.v2.parity = Parity::Even;
  out.T.parity = Parity::Odd;
  return out;
}

int cmd_simulate(const std::string& cfg_path, bool resume) {
  FileConfig fc = parse_config(cfg_path);
  fs::create_directories(fc.out_dir);

  State init;
  std::vector<DiagnosticsRecord> rows;
  int step_offset = 0;
  if (resume) {
    const RunManifest prev = read_manifest(fc.out_dir + "/manifest.json");
    init = read_checkpoint(fc.out_dir + "/checkpoint", fc.solver.grid);
    rows = read_diagnostics(fc.out_dir + "/diagnostics.csv");
    while (!rows.empty() && rows.back().t >= init.time - 1e-12) rows.pop_back();
    step_offset = prev.steps;
  } else if (fc.initial == "snapshot") {
    init = load_snapshot_initial(fc);
  } else {
    init = builtin_initial(fc.solver.grid, fc.initial);
  }

  RunManifest man;
  man.seed = fc.seed;
  man.config_echo = fc.raw;
  man.diagnostics = "diagnostics.csv";

  int rec_idx = int(rows.size());
  RunHooks hooks;
  if (fc.write_snapshots) {
    hooks.on_record = [&](const State& s, const DiagnosticsRecord&) {
      char name[64];
      for (const auto& [field, ptr] :
           {std::pair<const char*, const RealField*>{"v1", &s.v1},
            {"v2", &s.v2},
            {"T", &s.T}}) {
        std::snprintf(name, sizeof name, "snap_%05d_%s.snap", rec_idx, field);
        write_snapshot(fc.out_dir + "/" + name, *ptr, field, s.time);
        man.snapshots.push_back({field, name, s.time});
      }
      ++rec_idx;
    };
  }

  const RunResult res = run(fc.solver, init, hooks);
  for (DiagnosticsRecord r : res.diagnostics) {
    r.step += step_offset;
    rows.push_back(r);
  }
  write_diagnostics(fc.out_dir + "/diagnostics.csv", rows);
  write_checkpoint(fc.out_dir + "/checkpoint", res.final_state);
  man.status = res.status;
  man.final_time = res.final_state.time;
  man.steps = step_offset + res.steps;
  write_manifest(fc.out_dir + "/manifest.json", man);

  std::printf("status=%s steps=%d t=%.17g diagnostics=%s\n", res.status.c_str(),
              man.steps, man.final_time, (fc.out_dir + "/diagnostics.csv").c_str());
  if (res.status != "complete") {
    std::fprintf(stderr, "run diverged at t=%.17g\n", res.blowup_time);
    return 2;
  }
  return 0;
}

int cmd_eps_sweep(const std::string& cfg_path, const std::vector<double>& eps,
                  const std::string& report) {
  const FileConfig fc = parse_config(cfg_path);
  const State init = fc.initial == "snapshot" ? load_snapshot_initial(fc)
                                              : builtin_initial(fc.solver.grid, fc.initial);
  const std::vector<SweepRow> sweep = eps_sweep(fc.solver, eps, init);
  std::string text = "eps_high,eps_low,distance\n";
  char buf[160];
  for (const SweepRow& r : sweep) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", r.eps_high, r.eps_low,
                  r.distance);
    text += buf;
  }
  std::fputs(text.c_str(), stdout);
  if (!report.empty()) {
    std::ofstream out(report);
    if (!out) throw std::runtime_error(report + ": cannot open for writing");
    out << text;
  }
  return 0;
}

Grid parse_grid_spec(const std::string& spec) {
  int nx = 0, ny = 0, nz = 0;
  double h = 0.0;
  char tail = 0;
  if (std::sscanf(spec.c_str(), "%d,%d,%d,%lf%c", &nx, &ny, &nz, &h, &tail) != 4)
    throw std::runtime_error("--grid wants 'nx,ny,nz,h', got '" + spec + "'");
  return make_grid(nx, ny, nz, h);
}

int run_gronwall(int instances, std::uint64_t seed, int outputs, const std::string& report) {
  if (instances < 1) throw std::runtime_error("--instances must be >= 1");
  std::string text = "instance,lhs,rhs,ratio\n";
  char buf[200];
  double c_star = 0.0;
  int violations = 0;
  for (int i = 0; i < instances; ++i) {
    const GronwallInstance inst = gronwall_instance(seed, std::uint64_t(i));
    const GronwallCheck chk = check_gronwall(inst, outputs);
    if (!chk.converged)
      throw std::runtime_error("gronwall instance " + std::to_string(i) +
                               ": integration did not reach tolerance");
    std::size_t at = 0;
    double best = -1.0;
    for (std::size_t j = 0; j < chk.t.size(); ++j) {
      const double b = chk.bound[j];
      const double ratio = std::isfinite(b) ? (chk.A[j] + chk.intB[j]) / b : 0.0;
      if (ratio > best) {
        best = ratio;
        at = j;
      }
    }
    violations += chk.violations;
    c_star = std::max(c_star, chk.max_ratio);
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g\n", i,
                  chk.A[at] + chk.intB[at], chk.bound[at], chk.max_ratio);
    text += buf;
  }
  std::snprintf(buf, sizeof buf, "C_star=%.17g\nviolations=%d\n", c_star, violations);
  text += buf;
  std::fputs(text.c_str(), stdout);
  if (!report.empty()) {
    std::ofstream out(report);
    if (!out) throw std::runtime_error(report + ": cannot open for writing");
    out << text;
  }
  return 0;
}

int cmd_verify(const std::string& lemma, int samples, std::uint64_t seed,
               const std::string& grid_spec, const std::string& report,
               const std::string& family, int degree, int threads) {
  if (lemma == "gronwall") return run_gronwall(samples, seed, 16, report);

  const Grid g = parse_grid_spec(grid_spec);
  EnsembleOptions opt;
  opt.samples = samples;
  opt.seed = seed;
  opt.threads = threads;
  opt.spec.family = sample_family_from_string(family);
  if (degree > 0) opt.spec.degree = degree;
  const EnsembleReport rep = run_ensemble(g, lemma_from_string(lemma), opt);
  if (!report.empty()) write_ensemble_report(report, rep);
  std::printf("lemma=%s samples=%d C_star=%.17g violations=%d\n",
              to_string(rep.id).c_str(), samples, rep.fit.c_star, rep.violations);
  return rep.violations == 0 ? 0 : 2;
}

int cmd_monitor_report(const std::string& diag_path, const std::string& check,
                       double eps, const MonitorParams& mp, const std::string& report) {
  MonitorInput in;
  in.rows = read_diagnostics(diag_path);
  in.eps = eps;
  in.params = mp;
  const CheckReport rep = run_check(in, check);
  if (!report.empty()) write_check_report(report, rep);
  std::printf("check=%s points=%zu C_star=%.17g violations=%d\n", rep.id.c_str(),
              rep.points.size(), rep.c_star, rep.violations);
  if (rep.first_exceed >= 0.0) std::printf("first_exceed=%.17g\n", rep.first_exceed);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pseudo-spectral primitive-equation toolbox"};
  app.set_version_flag("--version", "anisopede 1.0.0");
  app.require_subcommand(1);
  std::string workdir;
  app.add_option("--workdir", workdir, "directory all relative paths live in");

  int exit_code = 0;

  auto* sim = app.add_subcommand("simulate", "integrate a configured run");
  std::string sim_cfg;
  bool sim_resume = false;
  sim->add_option("--config", sim_cfg, "config file")->required();
  sim->add_flag("--resume", sim_resume, "continue from the run's checkpoint");
  sim->callback([&]() {
    enter_workdir(workdir);
    exit_code = cmd_simulate(sim_cfg, sim_resume);
  });

  auto* sweep = app.add_subcommand("eps-sweep", "compare runs across eps values");
  std::string sweep_cfg, sweep_report;
  std::vector<double> sweep_eps;
  sweep->add_option("--config", sweep_cfg, "config file")->required();
  sweep->add_option("--eps", sweep_eps, "eps values, largest first")
      ->required()
      ->delimiter(',');
  sweep->add_option("--report", sweep_report, "write the distance table here");
  sweep->callback([&]() {
    enter_workdir(workdir);
    exit_code = cmd_eps_sweep(sweep_cfg, sweep_eps, sweep_report);
  });

  auto* verify = app.add_subcommand("verify", "randomized inequality checks");
  std::string v_lemma, v_grid = "32,32,32,0.5", v_report, v_family = "trig-poly";
  int v_samples = 100, v_degree = 0, v_threads = 0;
  std::uint64_t v_seed = 1;
  verify
      ->add_option("--lemma", v_lemma,
                   "one of: lad-min, lad-l6, lad-sq, disk, sup-z-l2, sup-z-l4, "
                   "sup-z-l4-disk, log-sobolev, gronwall")
      ->required();
  verify->add_option("--samples", v_samples, "ensemble size");
  verify->add_option("--seed", v_seed, "master seed");
  verify->add_option("--grid", v_grid, "nx,ny,nz,h");
  verify->add_option("--report", v_report, "write the per-sample table here");
  verify->add_option("--family", v_family, "trig-poly, gaussian-bump or boundary-layer");
  verify->add_option("--degree", v_degree, "trig family max mode, 0 for default");
  verify->add_option("--threads", v_threads, "worker cap, 0 for automatic");
  verify->callback([&]() {
    enter_workdir(workdir);
    exit_code = cmd_verify(v_lemma, v_samples, v_seed, v_grid, v_report, v_family,
                           v_degree, v_threads);
  });

  auto* gron = app.add_subcommand("gronwall-check", "comparison-lemma instance sweep");
  int g_instances = 100, g_outputs = 16;
  std::uint64_t g_seed = 1;
  std::string g_report;
  gron->add_option("--instances", g_instances, "number of seeded instances");
  gron->add_option("--seed", g_seed, "master seed");
  gron->add_option("--outputs", g_outputs, "bound checks per instance");
  gron->add_option("--report", g_report, "write the instance table here");
  gron->callback([&]() {
    enter_workdir(workdir);
    exit_code = run_gronwall(g_instances, g_seed, g_outputs, g_report);
  });

  auto* mon = app.add_subcommand("monitor-report", "inequality checks over diagnostics");
  std::string m_diag, m_check, m_report;
  double m_eps = 0.0;
  MonitorParams m_params;
  mon->add_option("--diagnostics", m_diag, "diagnostics CSV from simulate")->required();
  mon->add_option("--check", m_check,
                  "one of: growth-bound, weighted-growth, shear-lq, hgrad-v, "
                  "hgrad-v-poly, grad-T, time-deriv, local-energy")
      ->required();
  mon->add_option("--eps", m_eps, "eps the run used");
  mon->add_option("--q", m_params.q_exp, "q exponent the run used");
  mon->add_option("--r", m_params.r_exp, "r exponent the run used");
  mon->add_option("--m", m_params.m_exp, "m exponent the run used");
  mon->add_option("--qmax", m_params.qmax, "norm ladder cap");
  mon->add_option("--r0", m_params.r0, "local energy radius");
  mon->add_option("--delta0", m_params.delta0, "local energy smallness scale");
  mon->add_option("--report", m_report, "write the (t, lhs, rhs, ratio) table here");
  mon->callback([&]() {
    enter_workdir(workdir);
    exit_code = cmd_monitor_report(m_diag, m_check, m_eps, m_params, m_report);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return exit_code;
}
