#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

#include "driftwalk/hitting.hpp"
#include "driftwalk/normal.hpp"
#include "driftwalk/simulate.hpp"

namespace {

using driftwalk::McEstimate;
using driftwalk::MomentTriple;
using driftwalk::ProbabilityBand;
using driftwalk::SimConfig;
using driftwalk::TailBoundPair;
using driftwalk::TailShape;
using driftwalk::bm_crossing_probability;
using driftwalk::bp_tail_bounds;
using driftwalk::fpt_probability_band;
using driftwalk::hitting_LN_detail;
using driftwalk::hitting_LN_estimate;
using driftwalk::ou_passage_probability;
using driftwalk::sample_LN;
using driftwalk::sample_ou_fpt_moments;
using driftwalk::tail_shape;

// Empirical raw moments of a positive sample.
MomentTriple empirical_triple(const std::vector<double>& xs) {
  MomentTriple m;
  for (double x : xs) {
    m.m1 += x;
    m.m2 += x * x;
    m.m3 += x * x * x;
  }
  const double n = static_cast<double>(xs.size());
  m.m1 /= n;
  m.m2 /= n;
  m.m3 /= n;
  return m;
}

}  // namespace

TEST_SUITE("hitting") {

TEST_CASE("shape parameters match hand arithmetic") {
  // Exponential-type triple: mean 1, second moment 2, third moment 6.
  const TailShape exp1 = tail_shape({1.0, 2.0, 6.0});
  CHECK(exp1.cm2 == 1.0);
  CHECK(exp1.dm2 == 2.0);
  // Point mass at 1.
  const TailShape point = tail_shape({1.0, 1.0, 1.0});
  CHECK(point.cm2 == 0.0);
  CHECK(point.dm2 == 0.0);
  // Scale invariance: the same shape at twice the scale.
  const TailShape exp2 = tail_shape({2.0, 8.0, 48.0});
  CHECK(exp2.cm2 == 1.0);
  CHECK(exp2.dm2 == 2.0);
}

TEST_CASE("shape rejects inadmissible triples but tolerates rounding dust") {
  CHECK_THROWS_AS(tail_shape({0.0, 1.0, 1.0}), std::domain_error);
  CHECK_THROWS_AS(tail_shape({-1.0, 2.0, 6.0}), std::domain_error);
  // Second moment below the squared mean.
  CHECK_THROWS_AS(tail_shape({1.0, 0.5, 1.0}), std::domain_error);
  // Third-order inequality violated: m1*m3 = 3.5 < m2^2 = 4.
  CHECK_THROWS_AS(tail_shape({1.0, 2.0, 3.5}), std::domain_error);
  CHECK_THROWS_AS(
      tail_shape({std::numeric_limits<double>::quiet_NaN(), 2.0, 6.0}),
      std::domain_error);
  // A hair below the degenerate edge is rounding, not inadmissibility.
  const TailShape dust = tail_shape({1.0, 1.0 - 1e-13, 1.0});
  CHECK(dust.cm2 == 0.0);
  CHECK(dust.dm2 >= 0.0);
  // A clear violation still throws.
  CHECK_THROWS_AS(tail_shape({1.0, 1.0 - 1e-9, 1.0}), std::domain_error);
}

TEST_CASE("tail bounds reproduce the frozen exponential-triple values") {
  const MomentTriple m{1.0, 2.0, 6.0};
  const TailBoundPair at_half = bp_tail_bounds(m, 0.5);
  // (1/1.5)*(2 + 1.5*0.5)/(2 + 2*0.5) = 11/18.
  CHECK(at_half.upper_right == doctest::Approx(11.0 / 18.0).epsilon(1e-12));
  // 1 - 1.5^3/((2 + 2*1.5)*(2 + 1.5^2)).
  CHECK(at_half.upper_left ==
        doctest::Approx(0.8411764705882353).epsilon(1e-12));
  // Far branch: min(1/(1+4), (1/3)*2/(2+1)) = 0.2.
  const TailBoundPair at_two = bp_tail_bounds(m, 2.0);
  CHECK(at_two.upper_right == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(std::isnan(at_two.upper_left));
}

TEST_CASE("right-tail branches are continuous where they meet") {
  const MomentTriple m{1.0, 2.0, 6.0};  // cm2 = 1
  const double at_join = bp_tail_bounds(m, 1.0).upper_right;
  CHECK(at_join == 0.5);  // 1/(1+cm2) exactly
  const double below = bp_tail_bounds(m, 1.0 - 1e-12).upper_right;
  const double above = bp_tail_bounds(m, 1.0 + 1e-12).upper_right;
  CHECK(std::abs(below - 0.5) <= 1e-9);
  CHECK(std::abs(above - 0.5) <= 1e-9);
}

TEST_CASE("point-mass tails are certified impossible") {
  const MomentTriple point{2.0, 4.0, 8.0};
  for (double delta : {0.25, 0.5, 0.9}) {
    CAPTURE(delta);
    const TailBoundPair b = bp_tail_bounds(point, delta);
    CHECK(b.upper_right == 0.0);
    CHECK(b.upper_left == 0.0);
  }
}

TEST_CASE("tail bounds validate the offset") {
  const MomentTriple m{1.0, 2.0, 6.0};
  CHECK_THROWS_AS(bp_tail_bounds(m, 0.0), std::domain_error);
  CHECK_THROWS_AS(bp_tail_bounds(m, -0.5), std::domain_error);
  CHECK_THROWS_AS(
      bp_tail_bounds(m, std::numeric_limits<double>::quiet_NaN()),
      std::domain_error);
  // The left bound is undefined at or past the mean's full width.
  CHECK(std::isnan(bp_tail_bounds(m, 1.0).upper_left));
  CHECK(std::isnan(bp_tail_bounds(m, 1.5).upper_left));
  CHECK(bp_tail_bounds(m, 1.5).upper_right > 0.0);
}

TEST_CASE("bounds stay inside the unit interval on sampled shapes") {
  std::mt19937_64 rng(20240818);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int rep = 0; rep < 30; ++rep) {
    std::vector<double> xs(300);
    for (auto& x : xs) x = std::exp(0.7 * gauss(rng));
    const MomentTriple m = empirical_triple(xs);
    CAPTURE(m.m1);
    for (double delta = 0.05; delta < 2.0; delta += 0.1) {
      CAPTURE(delta);
      const TailBoundPair b = bp_tail_bounds(m, delta);
      CHECK(b.upper_right >= 0.0);
      CHECK(b.upper_right <= 1.0);
      if (delta < 1.0) {
        CHECK(b.upper_left >= 0.0);
        CHECK(b.upper_left <= 1.0);
      }
    }
  }
}

TEST_CASE("crossing band is empty before the clock starts") {
  const MomentTriple m{1.0, 2.0, 6.0};
  for (double t : {0.3, 1.0}) {
    const ProbabilityBand band = fpt_probability_band(1.0, 1.0, 1.0, t, m);
    CHECK(band.low == 0.0);
    CHECK(band.high == 0.0);
  }
}

TEST_CASE("crossing band is monotone in the horizon") {
  const MomentTriple m{1.0, 2.0, 6.0};
  double prev_low = -1.0, prev_high = -1.0;
  for (int j = 0; j < 10; ++j) {
    const double u = 0.2 + 0.3 * j;
    const double t = std::exp(2.0 * u);
    CAPTURE(t);
    const ProbabilityBand band = fpt_probability_band(1.0, 1.0, 1.0, t, m);
    CHECK(band.low >= 0.0);
    CHECK(band.low <= band.high);
    CHECK(band.high <= 1.0);
    CHECK(band.low >= prev_low);
    CHECK(band.high >= prev_high);
    prev_low = band.low;
    prev_high = band.high;
  }
  // Exactly at the mean clock the band is vacuous.
  const ProbabilityBand at_mean =
      fpt_probability_band(1.0, 1.0, 1.0, std::exp(2.0), m);
  CHECK(at_mean.low == 0.0);
  CHECK(at_mean.high == 1.0);
}

TEST_CASE("crossing band validates its inputs") {
  const MomentTriple m{1.0, 2.0, 6.0};
  CHECK_THROWS_AS(fpt_probability_band(-0.1, 1.0, 1.0, 5.0, m),
                  std::domain_error);
  CHECK_THROWS_AS(fpt_probability_band(1.0, 1.0, 0.0, 5.0, m),
                  std::domain_error);
  CHECK_THROWS_AS(fpt_probability_band(1.0, 1.0, 1.0, 5.0, {0.0, 1.0, 1.0}),
                  std::domain_error);
}

TEST_CASE("sampled crossing probability lands inside the band") {
  SimConfig mom_cfg;
  mom_cfg.paths = 20000;
  mom_cfg.seed = 31;
  mom_cfg.steps = 1000;
  const MomentTriple m = sample_ou_fpt_moments(-1.0, 1.0, mom_cfg);
  const ProbabilityBand band =
      fpt_probability_band(1.0, 1.0, 1.0, std::exp(2.0), m);
  SimConfig prob_cfg;
  prob_cfg.paths = 20000;
  prob_cfg.seed = 33;
  prob_cfg.steps = 500;
  const McEstimate p = ou_passage_probability(-1.0, 1.0, 1.0, prob_cfg);
  CHECK(p.mean >= band.low - 3.0 * p.std_error);
  CHECK(p.mean <= band.high + 3.0 * p.std_error);
}

TEST_CASE("level crossing and passage time tell the same story") {
  // P[crossing by t] through the direct grid equals P[passage by ln(t)/2]
  // through the stationary clock, up to sampling noise.
  SimConfig bm_cfg;
  bm_cfg.paths = 30000;
  bm_cfg.seed = 35;
  bm_cfg.steps = 1500;
  const McEstimate direct =
      bm_crossing_probability(1.0, 1.0, std::exp(2.0), bm_cfg);
  SimConfig ou_cfg;
  ou_cfg.paths = 30000;
  ou_cfg.seed = 37;
  ou_cfg.steps = 600;
  const McEstimate clocked = ou_passage_probability(-1.0, 1.0, 1.0, ou_cfg);
  const double combined =
      std::sqrt(direct.std_error * direct.std_error +
                clocked.std_error * clocked.std_error);
  CHECK(std::abs(direct.mean - clocked.mean) <= 3.0 * combined);
}

TEST_CASE("degenerate crossings are certain") {
  SimConfig cfg;
  cfg.paths = 10;
  const McEstimate bm = bm_crossing_probability(0.5, -1.0, 5.0, cfg);
  CHECK(bm.mean == 1.0);
  CHECK(bm.std_error == 0.0);
  const McEstimate ou = ou_passage_probability(0.5, -0.2, 1.0, cfg);
  CHECK(ou.mean == 1.0);
  CHECK(ou.std_error == 0.0);
}

TEST_CASE("probability samplers validate their inputs") {
  SimConfig cfg;
  cfg.paths = 10;
  CHECK_THROWS_AS(bm_crossing_probability(-1.0, 1.0, 5.0, cfg),
                  std::domain_error);
  CHECK_THROWS_AS(bm_crossing_probability(1.0, 1.0, 1.0, cfg),
                  std::domain_error);
  CHECK_THROWS_AS(ou_passage_probability(-1.0, 1.0, 0.0, cfg),
                  std::domain_error);
  cfg.paths = 0;
  CHECK_THROWS_AS(ou_passage_probability(-1.0, 1.0, 1.0, cfg),
                  std::domain_error);
}

TEST_CASE("peak-shortfall integral validates its inputs") {
  SimConfig cfg;
  cfg.paths = 100;
  cfg.steps = 100;
  CHECK_THROWS_AS(hitting_LN_estimate(1.0, 1.0, 1, 32, cfg),
                  std::domain_error);
  CHECK_THROWS_AS(hitting_LN_estimate(1.0, 1.0, 100, 1, cfg),
                  std::domain_error);
  CHECK_THROWS_AS(hitting_LN_estimate(1.0, 0.0, 100, 32, cfg),
                  std::domain_error);
  cfg.steps = 1;
  CHECK_THROWS_AS(hitting_LN_estimate(1.0, 1.0, 100, 32, cfg),
                  std::domain_error);
}

TEST_CASE("zero-band integral approaches the square-root law") {
  SimConfig cfg;
  cfg.paths = 2000;
  cfg.seed = 41;
  cfg.steps = 600;
  const McEstimate est = hitting_LN_estimate(0.0, 1.0, 100, 32, cfg);
  const double target = 2.0 * driftwalk::normal::pdf(0.0) * 10.0;
  CHECK(std::abs(est.mean - target) <= 0.10 * target);
}

TEST_CASE("integral agrees with the direct walk estimate") {
  SimConfig cfg;
  cfg.paths = 3000;
  cfg.seed = 43;
  cfg.steps = 500;
  const McEstimate est = hitting_LN_estimate(1.0, 1.0, 100, 32, cfg);
  SimConfig walk_cfg;
  walk_cfg.paths = 20000;
  walk_cfg.seed = 44;
  const McEstimate walk = sample_LN({0.5, 1.0}, {0.0, 1.0}, 100, walk_cfg);
  CHECK(std::abs(est.mean - walk.mean) <=
        est.std_error + 3.0 * walk.std_error);
}

TEST_CASE("integral decreases in the band strength beyond uncertainty") {
  SimConfig cfg;
  cfg.paths = 2000;
  cfg.seed = 45;
  cfg.steps = 300;
  const auto at_half = hitting_LN_detail(0.5, 1.0, 100, 32, cfg);
  const auto at_one = hitting_LN_detail(1.0, 1.0, 100, 32, cfg);
  const auto at_threehalf = hitting_LN_detail(1.5, 1.0, 100, 32, cfg);
  CHECK(at_half.estimate.mean - at_one.estimate.mean >
        at_half.estimate.std_error + at_one.estimate.std_error);
  CHECK(at_one.estimate.mean - at_threehalf.estimate.mean >
        at_one.estimate.std_error + at_threehalf.estimate.std_error);
  CHECK(at_half.x_max > 0.0);
  CHECK(at_half.nodes == 32);
}

}  // TEST_SUITE
