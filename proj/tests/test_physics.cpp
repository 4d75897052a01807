#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "tlsm/physics.hpp"

using namespace tlsm;
using std::numbers::pi;

TEST_CASE("default setup: resonant pi pulse in the middle half of the run") {
  const PhysicsConfig cfg = default_config();
  CHECK(cfg.e1 == 0.0);
  CHECK(cfg.e2 == 1.0);
  CHECK(cfg.delta_e == 1.0);
  CHECK(cfg.v0 == 1.0);
  CHECK(cfg.t_total == doctest::Approx(2.0 * pi).epsilon(1e-15));
  CHECK(cfg.rabi_period == doctest::Approx(2.0 * pi).epsilon(1e-15));
  CHECK(cfg.t2 - cfg.t1 == doctest::Approx(pi).epsilon(1e-15));
  CHECK(cfg.envelope_rise == doctest::Approx(pi / 50.0).epsilon(1e-15));
  CHECK(cfg.validate().empty());
}

TEST_CASE("envelope hits 0.5 exactly at the ramp centers") {
  const PhysicsConfig cfg = default_config();
  // the far ramp factor is 1.0 to double precision at 50 rise widths
  CHECK(pulse_envelope(cfg.t1, cfg) == 0.5);
  CHECK(pulse_envelope(cfg.t2, cfg) == 0.5);
  CHECK(pulse_envelope(0.5 * (cfg.t1 + cfg.t2), cfg) >= 1.0 - 1e-6);
  CHECK(pulse_envelope(0.0, cfg) < 1e-4);
  CHECK(pulse_envelope(cfg.t_total, cfg) < 1e-4);
}

TEST_CASE("drive rate is half the coupling times the envelope") {
  const PhysicsConfig cfg = default_config();
  for (double t : {0.3, 1.9, 3.1, 4.4, 6.0})
    CHECK(rabi_rate(t, cfg) ==
          doctest::Approx(0.5 * cfg.v0 * pulse_envelope(t, cfg))
              .epsilon(1e-15));
}

TEST_CASE("pulse area integrates to pi/2 within the ramp corrections") {
  const PhysicsConfig cfg = default_config();
  const int n = 200000;
  const double h = cfg.t_total / n;
  double area = 0.5 * (rabi_rate(0.0, cfg) + rabi_rate(cfg.t_total, cfg));
  for (int i = 1; i < n; ++i) area += rabi_rate(i * h, cfg);
  area *= h;
  CHECK(area == doctest::Approx(pi / 2.0).epsilon(1e-6));
}

TEST_CASE("validation rejects broken setups") {
  PhysicsConfig cfg = default_config();
  cfg.e2 = cfg.e1;
  CHECK(!cfg.validate().empty());

  cfg = default_config();
  cfg.t1 = cfg.t2 + 1.0;
  CHECK(!cfg.validate().empty());

  cfg = default_config();
  cfg.envelope_rise = (cfg.t2 - cfg.t1) / 2.0;  // ramps would overlap
  CHECK(!cfg.validate().empty());

  cfg = default_config();
  cfg.v0 = 2.0;  // window no longer a pi pulse
  cfg.refresh();
  CHECK(!cfg.validate().empty());

  cfg = default_config();
  cfg.v0 = 0.0;  // drive off is allowed (decay-only runs)
  cfg.refresh();
  CHECK(cfg.validate().empty());
}

// The rotating frame drops the fast phases exp(-i*e_j*t) from the
// amplitudes. Integrating the same system with the phases kept must give the
// same populations: c_j = a_j * exp(i*e_j*t), and the interaction picks up
// the phase difference exp(+-i*delta_e*t).
TEST_CASE("rotating frame agrees with an explicit fixed-frame integration") {
  const PhysicsConfig cfg = default_config();
  using cplx = std::complex<double>;
  const cplx im(0.0, 1.0);

  // mildly structured damping so the check exercises both channels
  const auto d1 = [](double t) { return 0.2 + 0.1 * std::sin(t); };
  const auto d2 = [](double t) { return 0.3 + 0.1 * std::cos(0.5 * t); };

  const int n = 8192;
  const double h = cfg.t_total / n;

  // rotating frame (the production equations)
  cplx c1(1.0, 0.0), c2(0.0, 0.0);
  const auto rot_rhs = [&](double t, cplx x1, cplx x2, cplx& f1, cplx& f2) {
    const double om = rabi_rate(t, cfg);
    f1 = -im * om * x2 - d1(t) * x1;
    f2 = -im * om * x1 - d2(t) * x2;
  };
  // fixed frame with explicit level phases
  cplx a1(1.0, 0.0), a2(0.0, 0.0);
  const auto lab_rhs = [&](double t, cplx x1, cplx x2, cplx& f1, cplx& f2) {
    const double om = rabi_rate(t, cfg);
    const cplx ph = std::exp(im * cfg.delta_e * t);
    f1 = -im * cfg.e1 * x1 - im * om * ph * x2 - d1(t) * x1;
    f2 = -im * cfg.e2 * x2 - im * om * std::conj(ph) * x1 - d2(t) * x2;
  };

  const auto rk4 = [&](auto rhs, cplx& x1, cplx& x2, double t) {
    cplx k1a, k1b, k2a, k2b, k3a, k3b, k4a, k4b;
    rhs(t, x1, x2, k1a, k1b);
    rhs(t + h / 2, x1 + 0.5 * h * k1a, x2 + 0.5 * h * k1b, k2a, k2b);
    rhs(t + h / 2, x1 + 0.5 * h * k2a, x2 + 0.5 * h * k2b, k3a, k3b);
    rhs(t + h, x1 + h * k3a, x2 + h * k3b, k4a, k4b);
    x1 += (h / 6.0) * (k1a + 2.0 * k2a + 2.0 * k3a + k4a);
    x2 += (h / 6.0) * (k1b + 2.0 * k2b + 2.0 * k3b + k4b);
  };

  for (int i = 0; i < n; ++i) {
    rk4(rot_rhs, c1, c2, i * h);
    rk4(lab_rhs, a1, a2, i * h);
  }
  CHECK(std::abs(std::norm(c1) - std::norm(a1)) < 1e-7);
  CHECK(std::abs(std::norm(c2) - std::norm(a2)) < 1e-7);
}
