#include "tlsm/density.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace tlsm {

DensityGrid::DensityGrid(int t_bins_, int v_bins_, double t_lo_, double t_hi_,
                         double v_lo_, double v_hi_)
    : t_bins(t_bins_),
      v_bins(v_bins_),
      t_lo(t_lo_),
      t_hi(t_hi_),
      v_lo(v_lo_),
      v_hi(v_hi_) {
  if (t_bins < 1 || v_bins < 1)
    throw std::invalid_argument("density: bins must be positive");
  if (!(t_hi > t_lo) || !(v_hi > v_lo))
    throw std::invalid_argument("density: empty axis range");
  mass.assign(static_cast<size_t>(t_bins) * v_bins, 0.0);
}

namespace {

// cell coordinate of an in-range point; exact upper edges clamp inward
inline int cell_of(double x, double lo, double hi, int bins) {
  int c = static_cast<int>((x - lo) / (hi - lo) * bins);
  return std::min(c, bins - 1);
}

}  // namespace

void DensityGrid::accumulate(std::span<const double> times,
                             std::span<const double> values, double weight) {
  if (times.size() != values.size())
    throw std::invalid_argument("density: times/values size mismatch");
  if (finalized) throw std::logic_error("density: grid already finalized");
  if (times.empty() || weight <= 0.0) {
    weight_sum += weight > 0.0 ? weight : 0.0;
    return;
  }
  std::vector<uint8_t> visited(mass.size(), 0);
  const auto mark = [&](double t, double v) {
    if (t < t_lo || t > t_hi || v < v_lo || v > v_hi) return;
    const int col = cell_of(t, t_lo, t_hi, t_bins);
    const int row = cell_of(v, v_lo, v_hi, v_bins);
    visited[static_cast<size_t>(row) * t_bins + col] = 1;
  };

  for (size_t i = 0; i < times.size(); ++i) mark(times[i], values[i]);

  // walk each segment through the grid lines it crosses and mark the cell
  // containing every sub-segment midpoint
  const double dt = (t_hi - t_lo) / t_bins;
  const double dv = (v_hi - v_lo) / v_bins;
  std::vector<double> cuts;
  for (size_t i = 0; i + 1 < times.size(); ++i) {
    const double t0 = times[i], t1 = times[i + 1];
    const double v0 = values[i], v1 = values[i + 1];
    cuts.clear();
    cuts.push_back(0.0);
    cuts.push_back(1.0);
    if (t1 != t0) {
      const double ta = std::min(t0, t1), tb = std::max(t0, t1);
      const int ka = static_cast<int>(std::ceil((ta - t_lo) / dt));
      const int kb = static_cast<int>(std::floor((tb - t_lo) / dt));
      // include the outer edges so sub-segments split where the band is left
      for (int k = std::max(ka, 0); k <= std::min(kb, t_bins); ++k) {
        const double u = (t_lo + k * dt - t0) / (t1 - t0);
        if (u > 0.0 && u < 1.0) cuts.push_back(u);
      }
    }
    if (v1 != v0) {
      const double va = std::min(v0, v1), vb = std::max(v0, v1);
      const int ka = static_cast<int>(std::ceil((va - v_lo) / dv));
      const int kb = static_cast<int>(std::floor((vb - v_lo) / dv));
      for (int k = std::max(ka, 0); k <= std::min(kb, v_bins); ++k) {
        const double u = (v_lo + k * dv - v0) / (v1 - v0);
        if (u > 0.0 && u < 1.0) cuts.push_back(u);
      }
    }
    std::sort(cuts.begin(), cuts.end());
    for (size_t c = 0; c + 1 < cuts.size(); ++c) {
      const double a = cuts[c], b = cuts[c + 1];
      if (b - a < 1e-12) continue;
      const double u = 0.5 * (a + b);
      mark(t0 + u * (t1 - t0), v0 + u * (v1 - v0));
    }
  }

  for (size_t i = 0; i < visited.size(); ++i)
    if (visited[i]) mass[i] += weight;
  weight_sum += weight;
}

void DensityGrid::merge(const DensityGrid& other) {
  if (other.t_bins != t_bins || other.v_bins != v_bins)
    throw std::invalid_argument("density: merge shape mismatch");
  if (finalized || other.finalized)
    throw std::logic_error("density: merge after finalize");
  for (size_t i = 0; i < mass.size(); ++i) mass[i] += other.mass[i];
  weight_sum += other.weight_sum;
}

void DensityGrid::finalize() {
  ps.assign(mass.size(), 0.0);
  if (weight_sum > 0.0)
    for (size_t i = 0; i < mass.size(); ++i)
      ps[i] = std::min(1.0, mass[i] / weight_sum);
  finalized = true;
}

double DensityGrid::ps_at(int v_row, int t_col) const {
  if (!finalized) throw std::logic_error("density: finalize before ps_at");
  if (v_row < 0 || v_row >= v_bins || t_col < 0 || t_col >= t_bins)
    throw std::out_of_range("density: ps_at index");
  return ps[static_cast<size_t>(v_row) * t_bins + t_col];
}

int band_index(double ps) {
  const int b = static_cast<int>(std::floor(ps * 10.0));
  return std::min(9, std::max(0, b));
}

std::vector<uint8_t> render_pgm(const DensityGrid& grid) {
  if (!grid.finalized) throw std::logic_error("density: finalize before render");
  char header[64];
  const int hn =
      std::snprintf(header, sizeof header, "P5\n%d %d\n255\n", grid.t_bins,
                    grid.v_bins);
  std::vector<uint8_t> out(header, header + hn);
  out.reserve(out.size() + grid.ps.size());
  for (int row = grid.v_bins - 1; row >= 0; --row)
    for (int col = 0; col < grid.t_bins; ++col) {
      const double g = 255.0 * (1.0 - grid.ps_at(row, col));
      out.push_back(static_cast<uint8_t>(std::lround(g)));
    }
  return out;
}

void write_pgm(const DensityGrid& grid, const std::string& path) {
  const std::vector<uint8_t> bytes = render_pgm(grid);
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("density: cannot open " + path);
  f.write(reinterpret_cast<const char*>(bytes.data()),
          static_cast<std::streamsize>(bytes.size()));
}

void write_sidecar(const DensityGrid& grid, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("density: cannot open " + path);
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "t_bins %d\nv_bins %d\nt_range %.17g %.17g\nv_range %.17g "
                "%.17g\n",
                grid.t_bins, grid.v_bins, grid.t_lo, grid.t_hi, grid.v_lo,
                grid.v_hi);
  f << buf;
  f << "row_order top_is_v_hi\n";
  f << "gray round(255*(1-P_S))\n";
  f << "band_edges 0.1 0.2 0.3 0.4 0.5 0.6 0.7 0.8 0.9\n";
  std::snprintf(buf, sizeof buf, "weight_sum %.17g\n", grid.weight_sum);
  f << buf;
}

void write_matrix(const DensityGrid& grid, const std::string& path) {
  if (!grid.finalized) throw std::logic_error("density: finalize before dump");
  std::ofstream f(path);
  if (!f) throw std::runtime_error("density: cannot open " + path);
  char buf[32];
  for (int row = 0; row < grid.v_bins; ++row) {
    for (int col = 0; col < grid.t_bins; ++col) {
      std::snprintf(buf, sizeof buf, col ? " %.10g" : "%.10g",
                    grid.ps_at(row, col));
      f << buf;
    }
    f << '\n';
  }
}

}  // namespace tlsm
