#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tlsm/evolve.hpp"
#include "tlsm/rng.hpp"
#include "tlsm/sweep.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitIntegration = 3;

bool parse_family(const std::string& name, tlsm::ScheduleKind& kind) {
  if (name == "const") {
    kind = tlsm::ScheduleKind::kConstant;
  } else if (name == "tgauss") {
    kind = tlsm::ScheduleKind::kTimeGaussian;
  } else if (name == "egauss") {
    kind = tlsm::ScheduleKind::kEnergyGaussian;
  } else {
    return false;
  }
  return true;
}

struct CommonArgs {
  std::string config_path;
  std::vector<std::string> sets;
  std::string family = "const";
  std::vector<double> params;
  int64_t n = 10000;
  uint64_t seed = 1;
  int workers = 1;
  std::string out_dir = "out";
  std::string dev_curve;
};

void add_common(CLI::App* cmd, CommonArgs& a, bool with_ensemble) {
  cmd->add_option("--config", a.config_path, "key = value config file");
  cmd->add_option("--set", a.sets, "inline config override key=value");
  cmd->add_option("--family", a.family,
                  "schedule family: const|tgauss|egauss");
  if (with_ensemble) {
    cmd->add_option("--params", a.params,
                    "sweep parameter values (t_eff / width)")
        ->delimiter(',');
    cmd->add_option("--n", a.n, "trajectories per cell");
    cmd->add_option("--workers", a.workers, "worker threads");
    cmd->add_option("--out", a.out_dir, "output directory");
    cmd->add_option("--dev-curve", a.dev_curve,
                    "deviation reference curve: smoothed|raw");
  }
  cmd->add_option("--seed", a.seed, "base seed of the curve panel");
}

// returns the list of configuration problems (empty on success)
std::vector<std::string> build_config(const CommonArgs& a,
                                      tlsm::RunConfig& cfg) {
  std::vector<std::string> errs;
  if (!a.config_path.empty())
    for (auto& e : tlsm::apply_config_file(cfg, a.config_path))
      errs.push_back(e);
  for (const auto& kv : a.sets) {
    const size_t eq = kv.find('=');
    if (eq == std::string::npos) {
      errs.push_back("--set: expected key=value, got '" + kv + "'");
      continue;
    }
    const std::string err =
        tlsm::apply_config_kv(cfg, kv.substr(0, eq), kv.substr(eq + 1));
    if (!err.empty()) errs.push_back(err);
  }
  if (!a.dev_curve.empty()) {
    const std::string err = tlsm::apply_config_kv(cfg, "dev_curve", a.dev_curve);
    if (!err.empty()) errs.push_back(err);
  }
  return errs;
}

int fail_validation(const std::vector<std::string>& errs) {
  for (const auto& e : errs) std::fprintf(stderr, "error: %s\n", e.c_str());
  return kExitValidation;
}

int run_ensemble(const CommonArgs& a, bool density, bool curves) {
  tlsm::RunConfig cfg;
  std::vector<std::string> errs = build_config(a, cfg);

  tlsm::ScheduleKind kind{};
  if (!parse_family(a.family, kind))
    errs.push_back("unknown schedule family '" + a.family + "'");

  std::vector<tlsm::CellSpec> cells;
  std::vector<double> params = a.params;
  if (params.empty()) params.push_back(5.0);
  for (double p : params) cells.push_back({kind, p});

  tlsm::SweepOptions opt;
  opt.base_seed = a.seed;
  opt.n = a.n;
  opt.workers = a.workers;

  tlsm::SweepOutputs out;
  out.out_dir = a.out_dir;
  out.density_grids = density;
  out.curve_dump = curves;

  if (errs.empty())
    for (auto& e : tlsm::validate_sweep(cells, cfg, opt)) errs.push_back(e);
  if (!errs.empty()) return fail_validation(errs);

  const tlsm::SweepReport report = tlsm::run_sweep(cells, cfg, opt, out);

  int64_t failures = 0;
  for (const auto& c : report.cells) {
    const auto& m = c.metrics;
    std::printf(
        "%-7s %-8g s=%.4f (se %.4f)  d=%.4f (se %.4f)  r=%.3f  ess=%.0f  "
        "[%.1fs]\n",
        tlsm::schedule_name(c.spec.kind), c.spec.param, m.softness,
        m.softness_se, m.deviation, m.deviation_se, m.reliability, m.ess,
        c.wall_seconds);
    if (c.integration_failures > 0) {
      failures += c.integration_failures;
      std::fprintf(stderr, "warning: %s %g: %lld trajectories failed\n",
                   tlsm::schedule_name(c.spec.kind), c.spec.param,
                   static_cast<long long>(c.integration_failures));
    }
  }
  std::printf("wrote %s (%.1fs total)\n", a.out_dir.c_str(),
              report.total_wall_seconds);
  return failures > 0 ? kExitIntegration : kExitOk;
}

int run_replay(const CommonArgs& a, uint64_t index,
               const std::string& series_path) {
  tlsm::RunConfig cfg;
  std::vector<std::string> errs = build_config(a, cfg);
  tlsm::ScheduleKind kind{};
  if (!parse_family(a.family, kind))
    errs.push_back("unknown schedule family '" + a.family + "'");
  double param = a.params.empty() ? 5.0 : a.params.front();
  tlsm::CellSpec spec{kind, param};
  if (errs.empty()) {
    for (auto& e : cfg.validate()) errs.push_back(e);
    if (!(param > 0.0)) errs.push_back("replay: parameter must be positive");
  }
  if (!errs.empty()) return fail_validation(errs);

  const tlsm::ReadoutCurve curve = tlsm::replay_curve(a.seed, index, cfg);
  std::fputs(tlsm::curve_dump_line(index, curve).c_str(), stdout);
  if (series_path.empty()) return kExitOk;

  tlsm::TrajectoryResult res;
  try {
    res = tlsm::evolve(curve, spec.schedule(cfg.sched), cfg.phys, cfg.integ);
  } catch (const tlsm::IntegrationError& e) {
    std::fprintf(stderr, "error: integration failed at step %d: %s\n",
                 e.step(), e.what());
    return kExitIntegration;
  }
  std::string series = "# t e_raw e_smoothed c2sq norm2\n";
  const tlsm::ReadoutCurve smooth = tlsm::smooth_readout(curve);
  const int nr = cfg.integ.n_recorded();
  char buf[192];
  for (int r = 0; r < nr; ++r) {
    const double t = (static_cast<double>(r) * cfg.integ.record_stride /
                      cfg.integ.n_steps) *
                     cfg.phys.t_total;
    std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g %.17g %.17g\n", t,
                  curve.eval(t), smooth.eval(t), res.c2sq[r], res.norm2[r]);
    series += buf;
  }
  if (series_path == "-") {
    std::fputs(series.c_str(), stdout);
  } else {
    std::ofstream file(series_path, std::ios::binary);
    if (!file) {
      std::fprintf(stderr, "error: cannot open %s\n", series_path.c_str());
      return kExitValidation;
    }
    file << series;
  }
  if (res.underflow)
    std::fprintf(stderr, "note: weight underflowed; reported as 0\n");
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"continuous fuzzy-monitoring sweep harness"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(tlsm::kVersion));

  CommonArgs sweep_args, density_args, replay_args;
  uint64_t replay_index = 0;
  std::string series_path;

  CLI::App* sweep = app.add_subcommand(
      "sweep", "run schedule cells and write metrics.csv + manifest.json");
  add_common(sweep, sweep_args, true);
  bool sweep_density = false;
  bool sweep_curves = false;
  sweep->add_flag("--density", sweep_density, "also write occupancy grids");
  sweep->add_flag("--dump-curves", sweep_curves,
                  "also write the sampled curve panel");

  CLI::App* density = app.add_subcommand(
      "density", "run cells and write occupancy grids (PGM + sidecars)");
  add_common(density, density_args, true);

  CLI::App* replay = app.add_subcommand(
      "replay", "print the curve a trajectory index would use");
  add_common(replay, replay_args, false);
  replay->add_option("--param", replay_args.params,
                     "schedule parameter for --series");
  replay->add_option("--index", replay_index, "trajectory index")->required();
  replay->add_option("--series", series_path,
                     "evolve the curve and write t/curve/c2sq/norm2 ('-' for "
                     "stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sweep->parsed())
      return run_ensemble(sweep_args, sweep_density, sweep_curves);
    if (density->parsed()) return run_ensemble(density_args, true, false);
    if (replay->parsed())
      return run_replay(replay_args, replay_index, series_path);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return kExitOk;
}
