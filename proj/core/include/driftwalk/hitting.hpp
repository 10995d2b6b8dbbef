#pragma once

// Three-moment tail bounds for nonnegative random variables and the
// time-change route to the expected running maximum at the square-root
// band: level crossings of a drifted Brownian motion map to first-passage
// times of the stationary-clock diffusion via Y(u) = B(e^{2u})/e^u, so
// moment bounds on those passage times band the crossing probabilities,
// and integrating the band over the crossing level estimates E[L_N].

#include <vector>

#include "driftwalk/simulate.hpp"

namespace driftwalk {

// Normalized shape of a nonnegative distribution with first three raw
// moments m1, m2, m3:
//   cm2 = (m2 - m1^2) / m1^2        (squared coefficient of variation)
//   dm2 = (m1*m3 - m2^2) / m1^4     (third-order spread)
// Both are nonnegative for every admissible triple.
struct TailShape {
    double cm2 = 0.0;
    double dm2 = 0.0;
};

// A certified probability interval: 0 <= low <= high <= 1.
struct ProbabilityBand {
    double low = 0.0;
    double high = 0.0;
};

// Upper bounds on the two relative tails of a nonnegative variable X with
// mean M1: `upper_right` bounds P[X > (1+delta)*M1] and `upper_left` bounds
// P[X < (1-delta)*M1].  The left bound is only defined for delta < 1 and is
// NaN otherwise.
struct TailBoundPair {
    double upper_right = 0.0;
    double upper_left = 0.0;
};

// Computes the normalized shape from a raw moment triple.  Throws
// std::domain_error when m1 <= 0, any moment is non-finite, or the triple
// violates the admissibility inequalities m2 >= m1^2, m1*m3 >= m2^2 beyond
// floating-point dust (violations within 1e-12 in the normalized ratios are
// clamped to zero, since empirical triples of near-degenerate samples land
// there by rounding alone).
TailShape tail_shape(const MomentTriple& m);

// Best three-moment bounds on the relative tails at offset `delta`:
// sharp closed forms in the shape parameters, clamped to [0, 1].  The
// right-tail bound switches expression at delta = cm2 and both branches
// agree there (value 1/(1+cm2)).  Throws std::domain_error for delta <= 0
// or an inadmissible triple; delta >= 1 leaves upper_left NaN.
TailBoundPair bp_tail_bounds(const MomentTriple& m, double delta);

// Band on the crossing probability P[tau_x < t], where tau_x is the first
// time after 1 that a Brownian motion drifting along -kappa*sqrt(s) and
// started at -x reaches 0 — equivalently the first-passage time T of the
// stationary-clock diffusion from a = -x to b = kappa/sqrt(sigma), read on
// the logarithmic clock u = ln(t)/2.  `m` must be the moment triple of that
// passage time.  Expresses u as (1 +/- delta)*m1 and applies the matching
// tail bound: u above the mean lower-bounds the probability via the right
// tail's complement, u below upper-bounds it via the left tail.  t <= 1
// returns (0, 0) since the crossing clock starts at 1.
ProbabilityBand fpt_probability_band(double x, double kappa, double sigma,
                                     double t, const MomentTriple& m);

// Probability that the stationary-clock diffusion started at `a` reaches
// level `b` by clock time `u_horizon`: Euler scheme with a bridge crossing
// check per step, time step u_horizon / cfg.steps.  a >= b crosses
// immediately (estimate 1 with zero error).
McEstimate ou_passage_probability(double a, double b, double u_horizon,
                                  const SimConfig& cfg);

// Probability that a Brownian motion started at 0 at time 1 crosses the
// moving level x + kappa*sqrt(s) somewhere in (1, t]: direct grid
// simulation with a bridge crossing check per step against the locally
// frozen boundary, cfg.steps intervals on [1, t].  Requires t > 1, x >= 0.
McEstimate bm_crossing_probability(double x, double kappa, double t,
                                   const SimConfig& cfg);

// Everything hitting_LN_estimate computed, for callers that surface
// diagnostics: the integral of the band midpoint over the crossing level,
// both scale conventions, the truncation point, and the split of the
// uncertainty into band width and sampling noise (both already scaled).
struct HittingReport {
    McEstimate estimate;           // mean = sigma * integral
    double integral = 0.0;         // unscaled band-midpoint integral over x
    double sigma_scaled = 0.0;     // sigma * integral (the reported mean)
    double root_sigma_scaled = 0.0;  // sqrt(sigma) * integral, the
                                     // alternative normalization implied by
                                     // the drift parameter kappa/sqrt(sigma)
    double x_max = 0.0;            // truncation point of the level integral
    long nodes = 0;                // quadrature nodes actually used
    double band_width_part = 0.0;  // scaled integral of the band half-width
    double mc_noise_part = 0.0;    // scaled integral of the MC stderr
};

// Estimates E[L_N] at the square-root band by integrating, over the
// crossing level x in [0, x_max], the midpoint of the crossing-probability
// band intersected with a 3-stderr Monte Carlo bracket; passage moments are
// re-estimated at every grid node.  x_max is the first probe level whose
// intersected band has high edge below 1e-6 (a level no sampled path
// reaches), and `x_grid` equally spaced trapezoid nodes cover [0, x_max].
// The reported std_error is the uncertainty width: the integrated band
// half-width plus the integrated MC stderr, both sigma-scaled.  Requires
// n_horizon >= 2 and x_grid >= 2.
McEstimate hitting_LN_estimate(double kappa, double sigma, long n_horizon,
                               long x_grid, const SimConfig& cfg);

// Same computation with the full report.
HittingReport hitting_LN_detail(double kappa, double sigma, long n_horizon,
                                long x_grid, const SimConfig& cfg);

}  // namespace driftwalk
