#include "tlsm/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace tlsm {

namespace {

bool parse_double(const std::string& s, double& out) {
  const char* b = s.data();
  const char* e = b + s.size();
  auto [p, ec] = std::from_chars(b, e, out);
  return ec == std::errc{} && p == e && std::isfinite(out);
}

bool parse_int(const std::string& s, int& out) {
  const char* b = s.data();
  const char* e = b + s.size();
  auto [p, ec] = std::from_chars(b, e, out);
  return ec == std::errc{} && p == e;
}

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::vector<std::string> RunConfig::validate() const {
  std::vector<std::string> errs = phys.validate();
  for (auto& e : sampler.validate()) errs.push_back(e);
  for (auto& e : integ.validate()) errs.push_back(e);
  for (auto& e : sched.validate()) errs.push_back(e);
  if (t_bins < 1 || v_bins < 1)
    errs.push_back("config: density bins must be positive");
  return errs;
}

std::string apply_config_kv(RunConfig& cfg, const std::string& key,
                            const std::string& value) {
  const auto bad = [&](const char* what) {
    return "config: " + key + ": " + what + " ('" + value + "')";
  };
  double d = 0.0;
  int i = 0;

  // physics; time-like keys are in Rabi periods of the pulse plateau
  if (key == "e1" || key == "e2" || key == "v0") {
    if (!parse_double(value, d)) return bad("expected a number");
    if (key == "e1") cfg.phys.e1 = d;
    if (key == "e2") cfg.phys.e2 = d;
    if (key == "v0") cfg.phys.v0 = d;
    cfg.phys.refresh();
    // keep the pulse tied to the same fractions of the run
    const double T = cfg.phys.t_total;
    if (T > 0.0 && cfg.phys.t2 > cfg.phys.t1) {
      const double f1 = cfg.phys.t1 / T, f2 = cfg.phys.t2 / T;
      const double fr = cfg.phys.envelope_rise / (cfg.phys.t2 - cfg.phys.t1);
      if (key == "v0" && d > 0.0) {
        cfg.phys.t_total = cfg.phys.rabi_period;
        cfg.phys.t1 = f1 * cfg.phys.t_total;
        cfg.phys.t2 = f2 * cfg.phys.t_total;
        cfg.phys.envelope_rise = fr * (cfg.phys.t2 - cfg.phys.t1);
      }
    }
    return "";
  }
  if (key == "t_total_rabi" || key == "t1_frac" || key == "t2_frac" ||
      key == "rise_frac") {
    if (!parse_double(value, d)) return bad("expected a number");
    if (d <= 0.0) return bad("must be positive");
    PhysicsConfig& p = cfg.phys;
    const double base = p.rabi_period > 0.0 ? p.rabi_period
                                            : 2.0 * std::numbers::pi;
    if (key == "t_total_rabi") {
      const double f1 = p.t_total > 0.0 ? p.t1 / p.t_total : 0.25;
      const double f2 = p.t_total > 0.0 ? p.t2 / p.t_total : 0.75;
      const double fr = p.t2 > p.t1 ? p.envelope_rise / (p.t2 - p.t1) : 0.02;
      p.t_total = d * base;
      p.t1 = f1 * p.t_total;
      p.t2 = f2 * p.t_total;
      p.envelope_rise = fr * (p.t2 - p.t1);
    } else if (key == "t1_frac") {
      p.t1 = d * p.t_total;
    } else if (key == "t2_frac") {
      p.t2 = d * p.t_total;
    } else {
      if (p.t2 <= p.t1) return bad("pulse window not set yet");
      p.envelope_rise = d * (p.t2 - p.t1);
    }
    return "";
  }

  // readout sampler
  if (key == "modes") {
    if (!parse_int(value, i) || i < 1) return bad("expected a positive int");
    cfg.sampler.m = i;
    return "";
  }
  if (key == "amp_fraction" || key == "margin_fraction") {
    if (!parse_double(value, d) || d < 0.0) return bad("expected >= 0");
    (key == "amp_fraction" ? cfg.sampler.amp_fraction
                           : cfg.sampler.margin_fraction) = d;
    return "";
  }

  // integrator
  if (key == "n_steps" || key == "record_stride") {
    if (!parse_int(value, i) || i < 1) return bad("expected a positive int");
    (key == "n_steps" ? cfg.integ.n_steps : cfg.integ.record_stride) = i;
    return "";
  }

  // schedule shape (per-cell kind/param are set by the harness)
  if (key == "teff_max" || key == "teff_min" || key == "e_max_margin") {
    if (!parse_double(value, d) || d <= 0.0) return bad("expected > 0");
    if (key == "teff_max") cfg.sched.t_eff_max = d;
    if (key == "teff_min") cfg.sched.t_eff_min = d;
    if (key == "e_max_margin") cfg.sched.e_max_margin = d;
    return "";
  }

  // metrics / density
  if (key == "dev_curve") {
    if (value == "smoothed") {
      cfg.dev_smoothed = true;
    } else if (value == "raw") {
      cfg.dev_smoothed = false;
    } else {
      return bad("expected smoothed|raw");
    }
    return "";
  }
  if (key == "t_bins" || key == "v_bins") {
    if (!parse_int(value, i) || i < 1) return bad("expected a positive int");
    (key == "t_bins" ? cfg.t_bins : cfg.v_bins) = i;
    return "";
  }
  return "config: unknown key '" + key + "'";
}

std::vector<std::string> apply_config_file(RunConfig& cfg,
                                           const std::string& path) {
  std::vector<std::string> errs;
  std::ifstream f(path);
  if (!f) {
    errs.push_back("config: cannot open " + path);
    return errs;
  }
  std::string line;
  int lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    if (eq == std::string::npos) {
      errs.push_back("config: line " + std::to_string(lineno) +
                     ": expected key = value");
      continue;
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) {
      errs.push_back("config: line " + std::to_string(lineno) +
                     ": empty key or value");
      continue;
    }
    const std::string err = apply_config_kv(cfg, key, value);
    if (!err.empty())
      errs.push_back("line " + std::to_string(lineno) + ": " + err);
  }
  return errs;
}

}  // namespace tlsm
