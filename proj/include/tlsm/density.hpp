#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace tlsm {

// Occupancy grid over the (t, value) plane: each curve deposits its weight
// once into every square its polyline crosses; finalize() normalizes by the
// total weight, giving the probability P_S that a curve from the weighted
// ensemble crosses square S.
struct DensityGrid {
  int t_bins = 40;
  int v_bins = 40;
  double t_lo = 0.0, t_hi = 1.0;
  double v_lo = 0.0, v_hi = 1.0;
  std::vector<double> mass;  // v_bins x t_bins, row-major by value bin
  double weight_sum = 0.0;
  bool finalized = false;
  std::vector<double> ps;  // filled by finalize()

  DensityGrid() = default;
  DensityGrid(int t_bins_, int v_bins_, double t_lo_, double t_hi_,
              double v_lo_, double v_hi_);

  // mark the squares crossed by the polyline through (times[i], values[i])
  // and deposit `weight` into each exactly once; samples outside the value
  // band contribute only where the polyline re-enters it
  void accumulate(std::span<const double> times,
                  std::span<const double> values, double weight);

  void merge(const DensityGrid& other);
  void finalize();

  double ps_at(int v_row, int t_col) const;
};

// gray band index for P_S under edges {0.1, 0.2, ..., 0.9}: band b covers
// [b/10, (b+1)/10)
int band_index(double ps);

// binary 8-bit graymap, gray = round(255*(1 - P_S)); row 0 is the TOP of the
// value axis (v_hi), matching image conventions
std::vector<uint8_t> render_pgm(const DensityGrid& grid);

void write_pgm(const DensityGrid& grid, const std::string& path);

// axis ranges, orientation note, band edges
void write_sidecar(const DensityGrid& grid, const std::string& path);

// plain numeric dump, one row per value bin from v_lo upward
void write_matrix(const DensityGrid& grid, const std::string& path);

}  // namespace tlsm
