#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tlsm/config.hpp"
#include "tlsm/density.hpp"
#include "tlsm/metrics.hpp"

namespace tlsm {

inline constexpr const char* kVersion = "1.0.0";

// one (schedule family, parameter) sweep cell
struct CellSpec {
  ScheduleKind kind = ScheduleKind::kConstant;
  double param = 5.0;  // t_eff (const), width_t (tgauss) or width_e (egauss)

  // schedule for this cell given the configured shape parameters
  FuzzinessSchedule schedule(const FuzzinessSchedule& shape) const;
};

struct SweepOptions {
  uint64_t base_seed = 1;
  int64_t n = 10000;
  int workers = 1;
  int block_size = 256;       // trajectories per deterministic work block
  bool density = false;       // accumulate occupancy grids
  bool keep_columns = false;  // keep per-trajectory weight/final columns
};

struct CellResult {
  CellSpec spec;
  EnsembleMetrics metrics;
  double wall_seconds = 0.0;
  int64_t integration_failures = 0;
  // occupancy grids (when requested): smoothed readout curves over the
  // sampling band, raw |c2|^2 series over [0, 1]
  std::optional<DensityGrid> readout_grid;
  std::optional<DensityGrid> c2sq_grid;
  // per-trajectory columns (when requested), indexed by trajectory
  std::vector<double> weights;
  std::vector<double> finals;
};

// Run one cell: n trajectories with seeds trajectory_seed(base_seed, i),
// split into fixed blocks claimed by `workers` threads and merged in block
// order, so every output is byte-identical for any worker count.
CellResult run_cell(const CellSpec& spec, const RunConfig& cfg,
                    const SweepOptions& opt);

struct SweepReport {
  std::vector<CellResult> cells;
  std::string csv;  // the exact bytes written to metrics.csv
  double total_wall_seconds = 0.0;
};

struct SweepOutputs {
  std::string out_dir;
  bool metrics_csv = true;
  bool density_grids = false;
  bool curve_dump = false;
};

// validation errors for a sweep request, all collected before any compute
std::vector<std::string> validate_sweep(const std::vector<CellSpec>& cells,
                                        const RunConfig& cfg,
                                        const SweepOptions& opt);

// run all cells and write metrics.csv, manifest.json and optional density /
// curve-dump files into out.out_dir
SweepReport run_sweep(const std::vector<CellSpec>& cells, const RunConfig& cfg,
                      const SweepOptions& opt, const SweepOutputs& out);

// CSV row block for a list of cell results (schema frozen in the README)
std::string metrics_csv(const std::vector<CellResult>& cells);

// (r, s) point with standard errors for dominance comparisons
struct MetricPoint {
  double r = 0.0;
  double s = 0.0;
  double r_se = 0.0;
  double s_se = 0.0;
};
MetricPoint metric_point(const EnsembleMetrics& m);

enum class Dominance { kBetter, kWorse, kIncomparable };

// a is better than b when both coordinates improve by more than one combined
// standard error; with zero errors this reduces to strict inequality
Dominance compare_dominance(const MetricPoint& a, const MetricPoint& b);

// exact curve panel replay: the curve trajectory `index` would use
ReadoutCurve replay_curve(uint64_t base_seed, uint64_t index,
                          const RunConfig& cfg);

// one dump line: index e_start e_end a_1..a_m (full precision)
std::string curve_dump_line(uint64_t index, const ReadoutCurve& curve);

}  // namespace tlsm
