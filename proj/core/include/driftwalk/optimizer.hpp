#pragma once

// Decision layer for the square-root replenishment band: closed-form
// surrogate solutions bracketing the true optimum, the two-sided ratio
// certificate between them, a simulation-based optimizer of the Brownian
// limit, holding-cost absorption, the backorder closed form, and the
// lost-sales/backorder equivalence diagnostic.  Every objective carries the
// sigma*sqrt(N) scale; the band exponent is alpha = 1/2 throughout.

#include <vector>

#include "driftwalk/simulate.hpp"

namespace driftwalk {

// Unit costs.  c: production, p: lost-sales penalty, h: holding in the
// lost-sales model, b: backlog penalty, h_prime: holding in the backorder
// model.  All nonnegative.
struct CostParams {
    double c = 0.0;
    double p = 0.0;
    double h = 0.0;
    double b = 0.0;
    double h_prime = 0.0;
};

enum class SolveMethod {
    LOWER_SURROGATE,
    UPPER_SURROGATE,
    UPPER_UNCONSTRAINED,
    BROWNIAN,
    BACKORDER,
};

const char* to_string(SolveMethod method);

// A band choice with its objective value.  The band exponent is recorded
// and always 1/2: the analysis fixes the square-root shape and optimizes
// only the coefficient.
struct Solution {
    double kappa = 0.0;
    double objective = 0.0;
    SolveMethod method = SolveMethod::LOWER_SURROGATE;
    double alpha = 0.5;
};

// The two surrogate values and the certified range of their ratio:
// 2 = ratio_lower_cert <= v_upper/v_lower <= ratio_upper_cert, the right
// certificate being 2*phi(0)/phi(kappa_lower); the certified range holds
// when p >= 2c.
struct RatioReport {
    double v_lower = 0.0;
    double v_upper = 0.0;
    double ratio = 0.0;
    double ratio_lower_cert = 2.0;
    double ratio_upper_cert = 0.0;
};

// Simulation metadata behind a Brownian-limit solution.
struct BrownianDetail {
    Solution solution;
    double rho_mean = 0.0;           // rho estimate at the returned kappa
    double rho_std_error = 0.0;      // its standard error
    double objective_std_error = 0.0;  // sigma*sqrt(N)*p*rho_std_error
};

// One point of the equivalence diagnostic.
struct EquivalencePoint {
    double p = 0.0;
    double ratio = 0.0;
};

// Minimizer of the lower-bound surrogate: the inverse upper-tail value at
// c/p, negative when c/p exceeds 1/2.  Requires 0 < c < p.
double kappa_lower(double c, double p);

// Lower-bound surrogate solution: kappa_lower with objective
// sigma*sqrt(N)*p*phi(kappa_lower).  Requires 0 < c < p, sigma > 0, N >= 1.
Solution solve_lower(const CostParams& costs, double sigma, long n_horizon);

// Upper-bound surrogate: minimizes
//   F(kappa) = c*kappa + p*((1/kappa)*(1/2 - ccdf(kappa)) + G(kappa))
// with the removable point F(0) = 2*p*phi(0).  Constrained to kappa >= 0
// the search bracket is [0, 8] and the minimizer is 0 exactly whenever
// p <= 2c (F'(0+) = c - p/2 and F is convex on each half-line).
// Unconstrained searches kappa in [-8, 8]; for p < c the objective is
// unbounded below (it decays like (p - c)*|kappa|), so the search returns
// the bracket edge — the heuristic reading of "push the band as far
// negative as it will go".  Requires c > 0 and p > 0.
Solution solve_upper(const CostParams& costs, double sigma, long n_horizon,
                     bool constrained);

// Assembles both surrogates and the ratio certificate; verifies the
// bracketing kappa_lower <= kappa_upper (a numeric_error if violated,
// since the analysis guarantees it).  Requires 0 < c < p.
RatioReport ratio_report(const CostParams& costs, double sigma,
                         long n_horizon);

// Minimizes the Brownian-limit objective c*kappa + p*rho(kappa) over
// kappa in [kappa_lower - 1, kappa_upper + 1] using common-random-number
// estimates of rho on a coarse grid, a 7-point local quadratic fit, and a
// refinement step, all under cfg's seed; the reported objective is
// sigma*sqrt(N)*(c*kappa + p*rho_hat(kappa)).  Requires 0 < c < p.
Solution brownian_optimize(const CostParams& costs, double sigma,
                           long n_horizon, const SimConfig& cfg);

// Same optimization with the sampling metadata exposed.
BrownianDetail brownian_optimize_detail(const CostParams& costs, double sigma,
                                        long n_horizon, const SimConfig& cfg);

// Absorbs the lost-sales holding cost into the production and penalty
// rates: c <- c+h, p <- p+h, h <- 0; b and h_prime pass through.  Callers
// who start from a per-period holding rate must fold the model's 2/3
// weighting into h beforehand; this mapping is the bare substitution.
CostParams apply_holding(const CostParams& costs);

// Backorder closed form: kappa = inverse upper-tail of
// (c + h_prime)/(b + h_prime), objective
// sigma*sqrt(N)*((c+h')*kappa + (b+h')*G(kappa)).  Requires c < b.
Solution backorder_solve(const CostParams& costs, double sigma,
                         long n_horizon);

// Lost-sales-to-backorder objective ratio at matched penalties (b = p,
// h' = h) for each p in ascending p_list: the holding-adjusted lower-bound
// surrogate value over the backorder objective's leading term, which
// collapses to the Mills ratio phi(y)/(y*ccdf(y)) at y = the common
// optimal band.  Requires every p > c and p + h > 2*(c + h) so the shared
// band y is positive; the list must be strictly ascending.
std::vector<EquivalencePoint> equivalence_curve(
    double c, double h, const std::vector<double>& p_list, double sigma,
    long n_horizon);

}  // namespace driftwalk
