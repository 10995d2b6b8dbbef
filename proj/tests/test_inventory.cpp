#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <vector>

#include "driftwalk/inventory.hpp"

namespace {

using driftwalk::DemandModel;
using driftwalk::PathOutcome;
using driftwalk::SupplyPolicy;
using driftwalk::evolve_path;
using driftwalk::supply_schedule;

std::vector<double> gaussian_path(std::mt19937_64& rng, std::size_t len) {
  std::normal_distribution<double> dist(0.0, 1.0);
  std::vector<double> z(len);
  for (auto& v : z) v = dist(rng);
  return z;
}

}  // namespace

TEST_SUITE("inventory") {

TEST_CASE("supply schedule reproduces the cumulative band") {
  // Linear band: every period ships mu + kappa*sigma.
  for (long n : {1L, 5L, 99L}) {
    CHECK(supply_schedule({1.0, 2.0}, {10.0, 1.0}, n) == 12.0);
  }
  // First period always ships the full first-band increment.
  CHECK(supply_schedule({0.5, 1.0}, {10.0, 2.0}, 1) == 12.0);
  // Square-root band, fourth period: 10 + 2*(2 - sqrt(3)).
  const double expected = 10.0 + 2.0 * (2.0 - std::sqrt(3.0));
  CHECK(supply_schedule({0.5, 1.0}, {10.0, 2.0}, 4) ==
        doctest::Approx(expected).epsilon(1e-15));
  CHECK(supply_schedule({0.5, 1.0}, {10.0, 2.0}, 4) ==
        doctest::Approx(10.5359).epsilon(1e-5));

  // Partial sums of the schedule rebuild mu*n + kappa*sigma*n^alpha.
  struct Combo {
    double alpha, kappa, sigma, mu;
  };
  for (const Combo c : {Combo{0.3, -1.5, 2.0, 7.0}, Combo{0.5, 1.0, 2.0, 10.0},
                        Combo{0.8, 0.7, 0.5, 0.0}, Combo{1.0, 2.0, 1.0, 3.0}}) {
    const SupplyPolicy policy{c.alpha, c.kappa};
    const DemandModel demand{c.mu, c.sigma};
    double cumulative = 0.0;
    for (long n = 1; n <= 1337; ++n) {
      cumulative += supply_schedule(policy, demand, n);
      const double target =
          c.mu * static_cast<double>(n) +
          c.kappa * c.sigma * std::pow(static_cast<double>(n), c.alpha);
      CHECK(cumulative == doctest::Approx(target).epsilon(1e-9));
    }
  }
}

TEST_CASE("supply schedule rejects invalid input") {
  const SupplyPolicy ok{0.5, 1.0};
  const DemandModel demand{10.0, 2.0};
  CHECK_THROWS_AS(supply_schedule(ok, demand, 0), std::domain_error);
  CHECK_THROWS_AS(supply_schedule(ok, demand, -3), std::domain_error);
  CHECK_THROWS_AS(supply_schedule(ok, {10.0, 0.0}, 1), std::domain_error);
  CHECK_THROWS_AS(supply_schedule(ok, {10.0, -1.0}, 1), std::domain_error);
  CHECK_THROWS_AS(supply_schedule(ok, {-1.0, 1.0}, 1), std::domain_error);
  CHECK_THROWS_AS(supply_schedule({-0.1, 1.0}, demand, 1), std::domain_error);
  CHECK_THROWS_AS(supply_schedule({1.5, 1.0}, demand, 1), std::domain_error);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(supply_schedule({0.5, nan}, demand, 1), std::domain_error);
}

TEST_CASE("two-period hand trace") {
  // Draws (2, -1) with no safety band: net demand runs 2 then 1; the first
  // period loses both units, nothing more is lost in the second, and the
  // backorder model carries the positive part directly.
  const PathOutcome out = evolve_path({2.0, -1.0}, {0.5, 0.0}, {10.0, 1.0});
  REQUIRE(out.net_demand.size() == 2);
  CHECK(out.net_demand[0] == 2.0);
  CHECK(out.net_demand[1] == 1.0);
  CHECK(out.lost[0] == 2.0);
  CHECK(out.lost[1] == 2.0);
  CHECK(out.inventory_ls[0] == 0.0);
  CHECK(out.inventory_ls[1] == 1.0);
  CHECK(out.backlog[0] == 2.0);
  CHECK(out.backlog[1] == 1.0);
  CHECK(out.inventory_bo[0] == 0.0);
  CHECK(out.inventory_bo[1] == 0.0);
}

TEST_CASE("calm demand accumulates the safety band as stock") {
  const std::vector<double> calm(16, 0.0);
  const PathOutcome out = evolve_path(calm, {0.5, 1.0}, {10.0, 1.0});
  for (std::size_t k = 0; k < calm.size(); ++k) {
    const double band = std::sqrt(static_cast<double>(k + 1));
    CHECK(out.lost[k] == 0.0);
    CHECK(out.inventory_ls[k] == doctest::Approx(band).epsilon(1e-15));
    CHECK(out.backlog[k] == 0.0);
    CHECK(out.inventory_bo[k] == doctest::Approx(band).epsilon(1e-15));
  }
}

TEST_CASE("running maximum matches brute force and the ledger identities") {
  std::mt19937_64 rng(20240817u);
  for (double alpha : {0.0, 0.3, 0.5, 0.8, 1.0}) {
    for (double kappa : {-1.3, 0.0, 0.6, 2.0}) {
      for (double sigma : {0.5, 2.0}) {
        const std::vector<double> z = gaussian_path(rng, 64);
        const PathOutcome out = evolve_path(z, {alpha, kappa}, {0.0, sigma});

        double prev_lost = 0.0;
        for (std::size_t k = 0; k < z.size(); ++k) {
          // Brute-force prefix maximum, recomputed from scratch.
          double best = 0.0;
          double cum = 0.0;
          for (std::size_t j = 0; j <= k; ++j) {
            cum += z[j];
            const double s =
                cum - kappa * std::pow(static_cast<double>(j + 1), alpha);
            best = std::max(best, s);
          }
          CHECK(out.lost[k] == sigma * best);

          CHECK(out.lost[k] >= prev_lost);
          prev_lost = out.lost[k];

          CHECK(out.lost[k] >= 0.0);
          CHECK(out.inventory_ls[k] >= 0.0);
          CHECK(out.backlog[k] >= 0.0);
          CHECK(out.inventory_bo[k] >= 0.0);
          CHECK(out.inventory_ls[k] == out.lost[k] - out.net_demand[k]);
          CHECK(out.backlog[k] * out.inventory_bo[k] == 0.0);
          CHECK(out.backlog[k] - out.inventory_bo[k] == out.net_demand[k]);
        }
      }
    }
  }
}

TEST_CASE("extra safety stock never increases losses") {
  std::mt19937_64 rng(7u);
  for (int rep = 0; rep < 8; ++rep) {
    const std::vector<double> z = gaussian_path(rng, 80);
    const PathOutcome base = evolve_path(z, {0.6, 0.4}, {0.0, 1.5});
    const PathOutcome more = evolve_path(z, {0.6, 0.65}, {0.0, 1.5});
    for (std::size_t k = 0; k < z.size(); ++k) {
      CHECK(more.lost[k] <= base.lost[k]);
    }
  }
}

TEST_CASE("mean demand level does not affect any trajectory") {
  std::mt19937_64 rng(99u);
  const std::vector<double> z = gaussian_path(rng, 40);
  const PathOutcome a = evolve_path(z, {0.5, 0.8}, {0.0, 1.3});
  const PathOutcome b = evolve_path(z, {0.5, 0.8}, {7.0, 1.3});
  for (std::size_t k = 0; k < z.size(); ++k) {
    CHECK(a.net_demand[k] == b.net_demand[k]);
    CHECK(a.lost[k] == b.lost[k]);
    CHECK(a.inventory_ls[k] == b.inventory_ls[k]);
    CHECK(a.backlog[k] == b.backlog[k]);
    CHECK(a.inventory_bo[k] == b.inventory_bo[k]);
  }
}

TEST_CASE("path evolution rejects invalid input") {
  const SupplyPolicy policy{0.5, 1.0};
  const DemandModel demand{10.0, 1.0};
  CHECK_THROWS_AS(evolve_path({}, policy, demand), std::domain_error);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const double inf = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(evolve_path({1.0, nan}, policy, demand), std::domain_error);
  CHECK_THROWS_AS(evolve_path({inf}, policy, demand), std::domain_error);
  CHECK_THROWS_AS(evolve_path({1.0}, policy, {10.0, 0.0}), std::domain_error);
}

}  // TEST_SUITE
