#pragma once

// Monte Carlo estimators for the running-maximum model: expected peak
// shortfall E[L_N], the scale-free Brownian constant rho(kappa), and
// first-passage moments of the time-changed mean-reverting diffusion.
//
// Determinism contract: every estimator maps (inputs, seed) to one exact
// result.  Paths own disjoint counter-based substreams keyed by (seed, path
// index), workers claim contiguous path ranges, and the final reduction runs
// in path order with compensated summation — so the worker count (see the
// DRIFTWALK_THREADS environment variable) never changes any output bit.

#include <cstdint>
#include <vector>

#include "driftwalk/inventory.hpp"

namespace driftwalk {

// Monte Carlo run shape.  `paths` is the number of simulated trajectories,
// `steps` the time resolution where one is needed (walk length for
// sample_rho, Euler resolution for the diffusion samplers; sample_LN takes
// its horizon as an explicit argument instead).  When `antithetic` is set,
// paths are simulated in mirrored pairs (2k, 2k+1) driven by one shared
// normal stream with opposite signs: each path remains marginally exact and
// one quantile evaluation serves both.
struct SimConfig {
    long paths = 10000;
    std::uint64_t seed = 0;
    long steps = 1000;
    bool antithetic = true;
};

// Monte Carlo estimate: `mean` averages all per-path values; `std_error` is
// the standard error of that mean, measured over independent units (paths
// when plain, mirrored-pair averages when antithetic, zero when only one
// unit exists); `paths` echoes the config.
struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    long paths = 0;
};

// First three raw moments of a nonnegative sample.  Any empirical triple
// satisfies m2 >= m1^2 and m1*m3 >= m2^2 (Cauchy-Schwarz), renders
// downstream tail bounds well defined.
struct MomentTriple {
    double m1 = 0.0;
    double m2 = 0.0;
    double m3 = 0.0;
};

// Estimates the expected running maximum E[L_N] of the net-demand walk under
// the given replenishment policy: per path, the peak of
// sigma * (sum Z_i - kappa * n^alpha) over periods 0..N.  Throws
// std::domain_error on invalid policy/demand parameters, n_horizon < 1, or
// paths < 1.
McEstimate sample_LN(const SupplyPolicy& policy, const DemandModel& demand,
                     long n_horizon, const SimConfig& cfg);

// Estimates rho(kappa) = E[sup over t in [0,1] of (B_t - kappa*sqrt(t))] by
// its pre-limit: max over 0 <= n <= N of (sum Z_i - kappa*sqrt(n)) / sqrt(N)
// with N = cfg.steps.  Requires steps >= 100 so the discretization bias is
// below typical sampling noise; throws std::domain_error otherwise.
McEstimate sample_rho(double kappa, const SimConfig& cfg);

// Central finite difference of rho at `kappa` with step 0.05, both sides
// evaluated under common random numbers (same seed) so the noise cancels
// pathwise.
double rho_derivative(double kappa, const SimConfig& cfg);

// First-passage moment estimate plus the absorption shortfall: paths still
// alive at the horizon cap contribute the cap time to every moment instead
// of being discarded.
struct OuPassageDetail {
    MomentTriple moments;
    long paths = 0;
    long unabsorbed = 0;  // paths assigned the cap time
    double cap_u = 0.0;   // absorption horizon cap (time units of the
                          // stationary clock)
};

// Raw moments of the first-passage time T of the stationary-clock diffusion
// dY = -Y du + sqrt(2) dW from Y(0) = a to level b >= a.  Euler-Maruyama
// with time step cap/steps where cap = 20, with a Brownian-bridge crossing
// check inside every step; paths surviving to the cap (a warning is emitted
// on stderr) are assigned the cap time.  a == b returns all-zero moments;
// a > b throws std::domain_error, as do steps < 2, paths < 1, or non-finite
// endpoints.
MomentTriple sample_ou_fpt_moments(double a, double b, const SimConfig& cfg);

// Same estimate with the absorption bookkeeping exposed and no warning
// emission (callers decide how to surface it).
OuPassageDetail sample_ou_fpt_detail(double a, double b, const SimConfig& cfg);

// Raw per-path passage times behind the moment estimate, in path order,
// with the horizon cap applied (paths alive at the cap carry the cap time).
// Same validation as sample_ou_fpt_moments.
std::vector<double> sample_ou_passage_times(double a, double b,
                                            const SimConfig& cfg);

}  // namespace driftwalk
