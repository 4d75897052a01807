#include "tlsm/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"
#include "tlsm/evolve.hpp"
#include "tlsm/rng.hpp"

namespace tlsm {

namespace {

std::string format_param(double p) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", p);
  return buf;
}

// per-block partial results, merged in block order for determinism
struct BlockPartial {
  CellAccum acc;
  DensityGrid readout;
  DensityGrid c2sq;
  int64_t failures = 0;
};

}  // namespace

FuzzinessSchedule CellSpec::schedule(const FuzzinessSchedule& shape) const {
  FuzzinessSchedule s = shape;
  s.kind = kind;
  switch (kind) {
    case ScheduleKind::kConstant:
      s.t_eff_const = param;
      break;
    case ScheduleKind::kTimeGaussian:
      s.width_t = param;
      break;
    case ScheduleKind::kEnergyGaussian:
      s.width_e = param;
      break;
  }
  return s;
}

std::vector<std::string> validate_sweep(const std::vector<CellSpec>& cells,
                                        const RunConfig& cfg,
                                        const SweepOptions& opt) {
  std::vector<std::string> errs = cfg.validate();
  if (cells.empty()) errs.push_back("sweep: no cells requested");
  for (size_t i = 0; i < cells.size(); ++i) {
    if (!(cells[i].param > 0.0))
      errs.push_back("sweep: cell " + std::to_string(i) + " (" +
                     schedule_name(cells[i].kind) +
                     "): parameter must be positive");
  }
  if (opt.n < 100)
    errs.push_back("sweep: n_samples must be at least 100 (got " +
                   std::to_string(opt.n) + ")");
  if (opt.workers < 1) errs.push_back("sweep: workers must be >= 1");
  if (opt.block_size < 1) errs.push_back("sweep: block_size must be >= 1");
  return errs;
}

CellResult run_cell(const CellSpec& spec, const RunConfig& cfg,
                    const SweepOptions& opt) {
  const auto t_start = std::chrono::steady_clock::now();

  const FuzzinessSchedule sched = spec.schedule(cfg.sched);
  const PhysicsConfig& phys = cfg.phys;
  const IntegratorConfig& integ = cfg.integ;
  const CellGrids grids = build_cell_grids(sched, phys, integ, cfg.sampler.m);

  const int nr = integ.n_recorded();
  std::vector<double> rec_times(nr);
  for (int r = 0; r < nr; ++r)
    rec_times[r] = (static_cast<double>(r) * integ.record_stride / integ.n_steps) *
                   phys.t_total;

  // value band of the readout sampler (density grid + curve evaluation band)
  const double band_lo = phys.e1 - cfg.sampler.margin_fraction * phys.delta_e;
  const double band_hi = phys.e2 + cfg.sampler.margin_fraction * phys.delta_e;

  const int64_t n = opt.n;
  const int64_t bs = opt.block_size;
  const int64_t n_blocks = (n + bs - 1) / bs;
  std::vector<BlockPartial> partials(static_cast<size_t>(n_blocks));
  if (opt.density) {
    for (auto& p : partials) {
      p.readout = DensityGrid(cfg.t_bins, cfg.v_bins, 0.0, phys.t_total,
                              band_lo, band_hi);
      p.c2sq = DensityGrid(cfg.t_bins, cfg.v_bins, 0.0, phys.t_total, 0.0, 1.0);
    }
  }

  CellResult result;
  result.spec = spec;
  if (opt.keep_columns) {
    result.weights.assign(static_cast<size_t>(n), 0.0);
    result.finals.assign(static_cast<size_t>(n), 0.0);
  }

  std::atomic<int64_t> next_block{0};
  const auto worker = [&]() {
    EvolveWorkspace ws;
    TrajectoryResult res;
    std::vector<double> curve_dev(nr);   // curve used for the deviation metric
    std::vector<double> curve_band(nr);  // smoothed curve for the density grid
    for (;;) {
      const int64_t b = next_block.fetch_add(1);
      if (b >= n_blocks) break;
      BlockPartial& part = partials[static_cast<size_t>(b)];
      const int64_t lo = b * bs;
      const int64_t hi = std::min(n, lo + bs);
      for (int64_t i = lo; i < hi; ++i) {
        SplitMix64 rng(trajectory_seed(opt.base_seed, static_cast<uint64_t>(i)));
        const ReadoutCurve curve = sample_readout(rng, cfg.sampler, phys);
        try {
          evolve_on_grids(curve, sched, phys, integ, grids, ws, res);
        } catch (const IntegrationError&) {
          part.failures += 1;
          continue;
        }
        // curve values at the record times, via the shared half-grid table
        const ReadoutCurve smooth = smooth_readout(curve);
        const ReadoutCurve& devc = cfg.dev_smoothed ? smooth : curve;
        for (int r = 0; r < nr; ++r) {
          const size_t j =
              static_cast<size_t>(2) * integ.record_stride * r * grids.m;
          const double* row = &grids.sin_half[j];
          double vd = devc.trend(rec_times[r]);
          double vb = smooth.trend(rec_times[r]);
          for (int k = 0; k < grids.m; ++k) {
            vd += devc.coeffs[k] * row[k];
            vb += smooth.coeffs[k] * row[k];
          }
          curve_dev[r] = vd;
          curve_band[r] = vb;
        }
        const double dev2 =
            deviation_time_avg(curve_dev, res.c2sq, phys.e1, phys.delta_e);
        part.acc.add(res.weight, res.final_c2sq >= 0.5, dev2);
        if (res.underflow) part.acc.underflows += 1;
        if (opt.density) {
          part.readout.accumulate(rec_times, curve_band, res.weight);
          part.c2sq.accumulate(rec_times, res.c2sq, res.weight);
        }
        if (opt.keep_columns) {
          result.weights[static_cast<size_t>(i)] = res.weight;
          result.finals[static_cast<size_t>(i)] = res.final_c2sq;
        }
      }
    }
  };

  const int n_workers = std::max(1, opt.workers);
  if (n_workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(n_workers));
    for (int t = 0; t < n_workers; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  // merge partials in block order so results never depend on thread timing
  CellAccum acc;
  DensityGrid readout, c2sq;
  if (opt.density) {
    readout = DensityGrid(cfg.t_bins, cfg.v_bins, 0.0, phys.t_total, band_lo,
                          band_hi);
    c2sq = DensityGrid(cfg.t_bins, cfg.v_bins, 0.0, phys.t_total, 0.0, 1.0);
  }
  for (auto& p : partials) {
    acc.merge(p.acc);
    result.integration_failures += p.failures;
    if (opt.density) {
      readout.merge(p.readout);
      c2sq.merge(p.c2sq);
    }
  }
  result.metrics = finalize_metrics(acc);
  if (opt.density) {
    readout.finalize();
    c2sq.finalize();
    result.readout_grid = std::move(readout);
    result.c2sq_grid = std::move(c2sq);
  }
  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
          .count();
  return result;
}

std::string metrics_csv(const std::vector<CellResult>& cells) {
  std::string out = "schedule,param,n,s,s_se,d,d_se,r,ess\n";
  char buf[256];
  for (const auto& c : cells) {
    const EnsembleMetrics& m = c.metrics;
    std::snprintf(buf, sizeof buf,
                  "%s,%.6g,%lld,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g\n",
                  schedule_name(c.spec.kind), c.spec.param,
                  static_cast<long long>(m.n), m.softness, m.softness_se,
                  m.deviation, m.deviation_se, m.reliability, m.ess);
    out += buf;
  }
  return out;
}

MetricPoint metric_point(const EnsembleMetrics& m) {
  return {m.reliability, m.softness, m.reliability_se, m.softness_se};
}

Dominance compare_dominance(const MetricPoint& a, const MetricPoint& b) {
  const double gate_r = std::sqrt(a.r_se * a.r_se + b.r_se * b.r_se);
  const double gate_s = std::sqrt(a.s_se * a.s_se + b.s_se * b.s_se);
  if (a.r - b.r > gate_r && a.s - b.s > gate_s) return Dominance::kBetter;
  if (b.r - a.r > gate_r && b.s - a.s > gate_s) return Dominance::kWorse;
  return Dominance::kIncomparable;
}

ReadoutCurve replay_curve(uint64_t base_seed, uint64_t index,
                          const RunConfig& cfg) {
  SplitMix64 rng(trajectory_seed(base_seed, index));
  return sample_readout(rng, cfg.sampler, cfg.phys);
}

std::string curve_dump_line(uint64_t index, const ReadoutCurve& curve) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%llu",
                static_cast<unsigned long long>(index));
  std::string out = buf;
  std::snprintf(buf, sizeof buf, " %.17g %.17g", curve.e_start, curve.e_end);
  out += buf;
  for (double a : curve.coeffs) {
    std::snprintf(buf, sizeof buf, " %.17g", a);
    out += buf;
  }
  out += '\n';
  return out;
}

SweepReport run_sweep(const std::vector<CellSpec>& cells, const RunConfig& cfg,
                      const SweepOptions& opt, const SweepOutputs& out) {
  const std::vector<std::string> errs = validate_sweep(cells, cfg, opt);
  if (!errs.empty()) {
    std::string msg = "sweep validation failed:";
    for (const auto& e : errs) msg += "\n  " + e;
    throw std::invalid_argument(msg);
  }

  namespace fs = std::filesystem;
  const bool writes_files =
      !out.out_dir.empty() &&
      (out.metrics_csv || out.density_grids || out.curve_dump);
  if (writes_files) fs::create_directories(out.out_dir);

  const auto t_start = std::chrono::steady_clock::now();
  SweepReport report;
  SweepOptions cell_opt = opt;
  cell_opt.density = opt.density || out.density_grids;
  for (const auto& spec : cells)
    report.cells.push_back(run_cell(spec, cfg, cell_opt));
  report.total_wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
          .count();
  report.csv = metrics_csv(report.cells);

  if (!writes_files) return report;
  const fs::path dir(out.out_dir);

  if (out.metrics_csv) {
    std::ofstream f(dir / "metrics.csv", std::ios::binary);
    if (!f) throw std::runtime_error("sweep: cannot write metrics.csv");
    f << report.csv;
  }

  if (out.density_grids) {
    for (const auto& c : report.cells) {
      const std::string base = std::string("density_") +
                               schedule_name(c.spec.kind) + "_" +
                               format_param(c.spec.param);
      const auto dump = [&](const DensityGrid& g, const std::string& which) {
        const std::string stem = (dir / (base + "_" + which)).string();
        write_pgm(g, stem + ".pgm");
        write_sidecar(g, stem + ".txt");
        write_matrix(g, stem + ".dat");
      };
      if (c.readout_grid) dump(*c.readout_grid, "readout");
      if (c.c2sq_grid) dump(*c.c2sq_grid, "c2sq");
    }
  }

  if (out.curve_dump) {
    for (const auto& c : report.cells) {
      const std::string name = std::string("curves_") +
                               schedule_name(c.spec.kind) + "_" +
                               format_param(c.spec.param) + ".txt";
      std::ofstream f(dir / name, std::ios::binary);
      if (!f) throw std::runtime_error("sweep: cannot write " + name);
      for (int64_t i = 0; i < opt.n; ++i)
        f << curve_dump_line(static_cast<uint64_t>(i),
                             replay_curve(opt.base_seed,
                                          static_cast<uint64_t>(i), cfg));
    }
  }

  // manifest: run provenance, including wall-clock times, which are the one
  // output allowed to differ between reruns
  nlohmann::json man;
  man["version"] = kVersion;
  man["base_seed"] = opt.base_seed;
  man["n_samples"] = opt.n;
  man["workers"] = opt.workers;
  man["block_size"] = opt.block_size;
  man["config"] = {
      {"e1", cfg.phys.e1},
      {"e2", cfg.phys.e2},
      {"v0", cfg.phys.v0},
      {"t_total", cfg.phys.t_total},
      {"t1", cfg.phys.t1},
      {"t2", cfg.phys.t2},
      {"envelope_rise", cfg.phys.envelope_rise},
      {"modes", cfg.sampler.m},
      {"amp_fraction", cfg.sampler.amp_fraction},
      {"margin_fraction", cfg.sampler.margin_fraction},
      {"n_steps", cfg.integ.n_steps},
      {"record_stride", cfg.integ.record_stride},
      {"teff_max", cfg.sched.t_eff_max},
      {"teff_min", cfg.sched.t_eff_min},
      {"e_max_margin", cfg.sched.e_max_margin},
      {"dev_curve", cfg.dev_smoothed ? "smoothed" : "raw"},
      {"t_bins", cfg.t_bins},
      {"v_bins", cfg.v_bins},
  };
  man["cells"] = nlohmann::json::array();
  for (const auto& c : report.cells) {
    man["cells"].push_back({
        {"schedule", schedule_name(c.spec.kind)},
        {"param", c.spec.param},
        {"n", c.metrics.n},
        {"s", c.metrics.softness},
        {"s_se", c.metrics.softness_se},
        {"d", c.metrics.deviation},
        {"d_se", c.metrics.deviation_se},
        {"r", c.metrics.reliability},
        {"ess", c.metrics.ess},
        {"weight_sum", c.metrics.weight_sum},
        {"underflows", c.metrics.underflows},
        {"integration_failures", c.integration_failures},
        {"wall_seconds", c.wall_seconds},
    });
  }
  man["total_wall_seconds"] = report.total_wall_seconds;
  {
    std::ofstream f(dir / "manifest.json", std::ios::binary);
    if (!f) throw std::runtime_error("sweep: cannot write manifest.json");
    f << man.dump(2) << '\n';
  }
  return report;
}

}  // namespace tlsm
