#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "driftwalk/asymptotics.hpp"
#include "driftwalk/normal.hpp"
#include "driftwalk/simulate.hpp"

namespace {

using driftwalk::DemandModel;
using driftwalk::McEstimate;
using driftwalk::MomentTriple;
using driftwalk::OuPassageDetail;
using driftwalk::SimConfig;
using driftwalk::SupplyPolicy;
using driftwalk::rho_derivative;
using driftwalk::sample_LN;
using driftwalk::sample_ou_fpt_detail;
using driftwalk::sample_ou_fpt_moments;
using driftwalk::sample_rho;

// Saves and restores DRIFTWALK_THREADS around a test that rewrites it.
struct ThreadEnvGuard {
  bool had;
  std::string saved;
  ThreadEnvGuard() {
    const char* v = std::getenv("DRIFTWALK_THREADS");
    had = v != nullptr;
    if (had) saved = v;
  }
  ~ThreadEnvGuard() {
    if (had) {
      setenv("DRIFTWALK_THREADS", saved.c_str(), 1);
    } else {
      unsetenv("DRIFTWALK_THREADS");
    }
  }
};

double combined_se(const McEstimate& a, const McEstimate& b) {
  return std::sqrt(a.std_error * a.std_error + b.std_error * b.std_error);
}

}  // namespace

TEST_SUITE("simulate") {

TEST_CASE("worker count never changes a single output bit") {
  ThreadEnvGuard guard;
  const SupplyPolicy policy{0.7, 0.6};
  const DemandModel demand{0.0, 1.5};

  SimConfig walk_cfg;
  walk_cfg.paths = 301;  // odd, so the last antithetic unit is a singleton
  walk_cfg.seed = 42;

  SimConfig plain_cfg = walk_cfg;
  plain_cfg.antithetic = false;

  SimConfig rho_cfg;
  rho_cfg.paths = 77;
  rho_cfg.seed = 7;
  rho_cfg.steps = 128;

  SimConfig ou_cfg;
  ou_cfg.paths = 101;
  ou_cfg.seed = 11;
  ou_cfg.steps = 300;

  setenv("DRIFTWALK_THREADS", "1", 1);
  const McEstimate ln_1 = sample_LN(policy, demand, 256, walk_cfg);
  const McEstimate ln_plain_1 = sample_LN(policy, demand, 256, plain_cfg);
  const McEstimate rho_1 = sample_rho(0.3, rho_cfg);
  const OuPassageDetail ou_1 = sample_ou_fpt_detail(-0.8, 0.4, ou_cfg);

  for (const char* workers : {"2", "5"}) {
    CAPTURE(workers);
    setenv("DRIFTWALK_THREADS", workers, 1);
    const McEstimate ln_w = sample_LN(policy, demand, 256, walk_cfg);
    CHECK(ln_w.mean == ln_1.mean);
    CHECK(ln_w.std_error == ln_1.std_error);
    const McEstimate ln_plain_w = sample_LN(policy, demand, 256, plain_cfg);
    CHECK(ln_plain_w.mean == ln_plain_1.mean);
    CHECK(ln_plain_w.std_error == ln_plain_1.std_error);
    const McEstimate rho_w = sample_rho(0.3, rho_cfg);
    CHECK(rho_w.mean == rho_1.mean);
    CHECK(rho_w.std_error == rho_1.std_error);
    const OuPassageDetail ou_w = sample_ou_fpt_detail(-0.8, 0.4, ou_cfg);
    CHECK(ou_w.moments.m1 == ou_1.moments.m1);
    CHECK(ou_w.moments.m2 == ou_1.moments.m2);
    CHECK(ou_w.moments.m3 == ou_1.moments.m3);
    CHECK(ou_w.unabsorbed == ou_1.unabsorbed);
  }
}

TEST_CASE("seed selects the sample") {
  SimConfig a;
  a.paths = 200;
  a.seed = 1;
  SimConfig b = a;
  b.seed = 2;
  const McEstimate ea = sample_LN({0.5, 0.5}, {0.0, 1.0}, 64, a);
  const McEstimate eb = sample_LN({0.5, 0.5}, {0.0, 1.0}, 64, b);
  CHECK(ea.mean != eb.mean);
  // Replays of the same seed are exact.
  const McEstimate ea2 = sample_LN({0.5, 0.5}, {0.0, 1.0}, 64, a);
  CHECK(ea2.mean == ea.mean);
  CHECK(ea2.std_error == ea.std_error);
  CHECK(ea2.paths == a.paths);
}

TEST_CASE("doubling sigma doubles every reported value exactly") {
  SimConfig cfg;
  cfg.paths = 501;
  cfg.seed = 99;
  const McEstimate one = sample_LN({0.5, 0.7}, {3.0, 1.0}, 200, cfg);
  const McEstimate two = sample_LN({0.5, 0.7}, {3.0, 2.0}, 200, cfg);
  CHECK(two.mean == 2.0 * one.mean);
  CHECK(two.std_error == 2.0 * one.std_error);
  // The level-demand rate cancels out of the peak shortfall entirely.
  const McEstimate mu0 = sample_LN({0.5, 0.7}, {0.0, 1.0}, 200, cfg);
  CHECK(mu0.mean == one.mean);
}

TEST_CASE("zero-band mean matches the exact partial-sum law") {
  SimConfig cfg;
  cfg.paths = 40000;
  cfg.seed = 1;
  const McEstimate est = sample_LN({0.5, 0.0}, {0.0, 1.0}, 400, cfg);
  const double exact = driftwalk::spitzer_exact(0.0, 1.0, 400);
  CHECK(est.std_error > 0.0);
  CHECK(std::abs(est.mean - exact) <= 3.0 * est.std_error);
}

TEST_CASE("linear-band mean matches the exact series") {
  SimConfig cfg;
  cfg.paths = 30000;
  cfg.seed = 3;
  const McEstimate est = sample_LN({1.0, 0.8}, {0.0, 1.3}, 300, cfg);
  const double exact = driftwalk::spitzer_exact(0.8, 1.3, 300);
  CHECK(std::abs(est.mean - exact) <= 3.0 * est.std_error);
}

TEST_CASE("estimate dominates the convexity floor") {
  SimConfig cfg;
  cfg.paths = 10000;
  cfg.seed = 5;
  const McEstimate est = sample_LN({0.75, 1.0}, {0.0, 1.0}, 1000, cfg);
  const double floor = driftwalk::jensen_lower(0.75, 1.0, 1.0, 1000);
  CHECK(est.mean + 3.0 * est.std_error >= floor);
}

TEST_CASE("mirrored pairing agrees with plain sampling") {
  SimConfig anti;
  anti.paths = 20000;
  anti.seed = 11;
  SimConfig plain;
  plain.paths = 20000;
  plain.seed = 22;
  plain.antithetic = false;
  const McEstimate ea = sample_LN({0.5, 0.5}, {0.0, 1.0}, 256, anti);
  const McEstimate ep = sample_LN({0.5, 0.5}, {0.0, 1.0}, 256, plain);
  CHECK(ea.std_error > 0.0);
  CHECK(ep.std_error > 0.0);
  CHECK(std::abs(ea.mean - ep.mean) <= 3.0 * combined_se(ea, ep));
}

TEST_CASE("scaled maximum matches the exact law at zero band") {
  // With kappa = 0 the scaled pre-limit mean is exactly the partial-sum law
  // at the same length, divided by sqrt(N).
  SimConfig cfg;
  cfg.paths = 40000;
  cfg.seed = 5;
  cfg.steps = 400;
  const McEstimate est = sample_rho(0.0, cfg);
  const double exact = driftwalk::spitzer_exact(0.0, 1.0, 400) / 20.0;
  CHECK(std::abs(est.mean - exact) <= 3.0 * est.std_error);
}

TEST_CASE("scaled maximum dominates the one-point loss bound") {
  SimConfig cfg;
  cfg.paths = 20000;
  cfg.seed = 7;
  cfg.steps = 256;
  for (double kappa : {0.0, 0.5, 1.0}) {
    CAPTURE(kappa);
    const McEstimate est = sample_rho(kappa, cfg);
    CHECK(est.mean >= driftwalk::normal::loss(kappa) - 2.0 * est.std_error);
  }
}

TEST_CASE("scaled maximum decreases in the band strength") {
  SimConfig cfg;
  cfg.paths = 20000;
  cfg.seed = 9;
  cfg.steps = 256;
  const McEstimate at0 = sample_rho(0.0, cfg);
  const McEstimate at1 = sample_rho(1.0, cfg);
  CHECK(at0.mean - at1.mean > 5.0 * combined_se(at0, at1));
}

TEST_CASE("scaled-maximum derivative is negative and bounded") {
  // Common random numbers make the sign exact pathwise: raising the band
  // can only lower every path maximum.
  SimConfig cfg;
  cfg.paths = 20000;
  cfg.seed = 13;
  cfg.steps = 256;
  const double d = rho_derivative(0.5, cfg);
  CHECK(d < 0.0);
  CHECK(d > -1.2);
}

TEST_CASE("scaled maximum validates its inputs") {
  SimConfig cfg;
  cfg.steps = 99;
  CHECK_THROWS_AS(sample_rho(0.0, cfg), std::domain_error);
  cfg.steps = 100;
  cfg.paths = 0;
  CHECK_THROWS_AS(sample_rho(0.0, cfg), std::domain_error);
  cfg.paths = 1;
  CHECK_THROWS_AS(
      sample_rho(std::numeric_limits<double>::quiet_NaN(), cfg),
      std::domain_error);
  CHECK_NOTHROW(sample_rho(0.0, cfg));
}

TEST_CASE("peak-shortfall sampler validates its inputs") {
  SimConfig cfg;
  cfg.paths = 10;
  CHECK_THROWS_AS(sample_LN({0.5, 0.0}, {0.0, 0.0}, 10, cfg),
                  std::domain_error);
  CHECK_THROWS_AS(sample_LN({1.5, 0.0}, {0.0, 1.0}, 10, cfg),
                  std::domain_error);
  CHECK_THROWS_AS(sample_LN({0.5, 0.0}, {-1.0, 1.0}, 10, cfg),
                  std::domain_error);
  CHECK_THROWS_AS(sample_LN({0.5, 0.0}, {0.0, 1.0}, 0, cfg),
                  std::domain_error);
  cfg.paths = 0;
  CHECK_THROWS_AS(sample_LN({0.5, 0.0}, {0.0, 1.0}, 10, cfg),
                  std::domain_error);
}

TEST_CASE("single-path estimates are defined") {
  SimConfig cfg;
  cfg.paths = 1;
  cfg.seed = 3;
  const McEstimate est = sample_LN({0.5, 0.5}, {0.0, 1.0}, 32, cfg);
  CHECK(std::isfinite(est.mean));
  CHECK(est.std_error == 0.0);
  CHECK(est.paths == 1);
}

TEST_CASE("coincident passage endpoints give vanishing moments") {
  SimConfig cfg;
  cfg.paths = 10;
  const MomentTriple m = sample_ou_fpt_moments(0.7, 0.7, cfg);
  CHECK(m.m1 == 0.0);
  CHECK(m.m2 == 0.0);
  CHECK(m.m3 == 0.0);
}

TEST_CASE("passage sampler validates its inputs") {
  SimConfig cfg;
  cfg.paths = 10;
  cfg.steps = 100;
  CHECK_THROWS_AS(sample_ou_fpt_moments(0.5, -0.5, cfg), std::domain_error);
  CHECK_THROWS_AS(
      sample_ou_fpt_moments(std::numeric_limits<double>::infinity(), 0.0,
                            cfg),
      std::domain_error);
  cfg.steps = 1;
  CHECK_THROWS_AS(sample_ou_fpt_moments(-1.0, 0.0, cfg), std::domain_error);
  cfg.steps = 100;
  cfg.paths = 0;
  CHECK_THROWS_AS(sample_ou_fpt_moments(-1.0, 0.0, cfg), std::domain_error);
}

TEST_CASE("passage moments are an admissible tail triple") {
  SimConfig cfg;
  cfg.paths = 20000;
  cfg.seed = 13;
  cfg.steps = 2000;
  const OuPassageDetail d = sample_ou_fpt_detail(-1.0, 0.0, cfg);
  CHECK(d.unabsorbed == 0);
  CHECK(d.moments.m1 > 0.4);
  CHECK(d.moments.m1 < 3.0);
  CHECK(d.moments.m2 >= d.moments.m1 * d.moments.m1 * (1.0 - 1e-12));
  CHECK(d.moments.m1 * d.moments.m3 >=
        d.moments.m2 * d.moments.m2 * (1.0 - 1e-12));
}

TEST_CASE("halving the time step moves the first moment only slightly") {
  SimConfig coarse;
  coarse.paths = 40000;
  coarse.seed = 17;
  coarse.steps = 2000;
  SimConfig fine = coarse;
  fine.steps = 4000;
  const double m_coarse = sample_ou_fpt_detail(-1.0, 0.0, coarse).moments.m1;
  const double m_fine = sample_ou_fpt_detail(-1.0, 0.0, fine).moments.m1;
  CHECK(std::abs(m_coarse - m_fine) <= 0.06 * m_fine);
}

TEST_CASE("paths alive at the horizon cap carry the cap time") {
  SimConfig cfg;
  cfg.paths = 2000;
  cfg.seed = 19;
  cfg.steps = 2000;
  const OuPassageDetail d = sample_ou_fpt_detail(-0.5, 3.5, cfg);
  CHECK(d.unabsorbed > cfg.paths / 2);
  CHECK(d.cap_u == 20.0);
  CHECK(d.moments.m1 > 10.0);
  CHECK(d.moments.m1 <= 20.0);
  CHECK(d.moments.m3 <= 8000.0);
}

}  // TEST_SUITE
