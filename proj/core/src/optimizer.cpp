#include "driftwalk/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "driftwalk/errors.hpp"
#include "driftwalk/normal.hpp"

namespace driftwalk {

namespace {

void require(bool ok, const char* msg) {
    if (!ok) throw std::domain_error(msg);
}

void check_cost_pair(double c, double p) {
    require(std::isfinite(c) && c > 0.0,
            "production cost must be positive and finite");
    require(std::isfinite(p) && p > 0.0,
            "penalty cost must be positive and finite");
}

void check_scale(double sigma, long n_horizon) {
    require(std::isfinite(sigma) && sigma > 0.0,
            "sigma must be positive and finite");
    require(n_horizon >= 1, "horizon must be at least 1");
}

double scale_factor(double sigma, long n_horizon) {
    return sigma * std::sqrt(static_cast<double>(n_horizon));
}

// Per-unit upper-surrogate objective
//   F(kappa) = c*kappa + p*((1/2 - ccdf(kappa))/kappa + G(kappa)),
// extended by its limit 2*p*pdf(0) at kappa = 0.
double upper_objective_unit(double c, double p, double kappa) {
    if (kappa == 0.0) return 2.0 * p * normal::pdf(0.0);
    const double tail_gap = (0.5 - normal::ccdf(kappa)) / kappa;
    return c * kappa + p * (tail_gap + normal::loss(kappa));
}

// F'(kappa) = c + p*(pdf(k)/k - (1/2 - ccdf(k))/k^2 - ccdf(k)), kappa != 0.
double upper_gradient(double c, double p, double kappa) {
    const double tail = normal::ccdf(kappa);
    return c + p * (normal::pdf(kappa) / kappa -
                    (0.5 - tail) / (kappa * kappa) - tail);
}

// F''(kappa) = 2*p*(1/2 - ccdf(k) - k*pdf(k))/k^3, positive on either side
// of zero (the numerator is the gap between the integral of the density
// over [0, k] and its right-endpoint rectangle), so F is convex on each
// half-line and Newton converges from a one-cell grid bracket.
double upper_curvature(double p, double kappa) {
    const double numer = 0.5 - normal::ccdf(kappa) - kappa * normal::pdf(kappa);
    return p * 2.0 * numer / (kappa * kappa * kappa);
}

// Below this the stationary point is indistinguishable from the removable
// point at zero: the tail-gap quotient loses all relative accuracy there,
// and the objective error from snapping is O(kappa^2).
constexpr double kSnapToZero = 1e-7;

// Minimize F over [lo, hi]: coarse grid scan, then Newton polish on the
// flanking-cell bracket (valid by per-side convexity).  Endpoint minima are
// returned as-is.
double minimize_upper_objective(double c, double p, double lo, double hi,
                                int cells) {
    const double width = hi - lo;
    int best = 0;
    double best_f = upper_objective_unit(c, p, lo);
    for (int i = 1; i <= cells; ++i) {
        const double x = lo + width * (static_cast<double>(i) / cells);
        const double fx = upper_objective_unit(c, p, x);
        if (fx < best_f) {
            best_f = fx;
            best = i;
        }
    }
    if (best == 0 || best == cells) {
        return lo + width * (static_cast<double>(best) / cells);
    }
    const double bracket_lo = lo + width * (static_cast<double>(best - 1) / cells);
    const double bracket_hi = lo + width * (static_cast<double>(best + 1) / cells);
    double x = lo + width * (static_cast<double>(best) / cells);
    if (std::fabs(x) < 1e-4) {
        x = std::clamp(0.5 * (bracket_lo + bracket_hi), bracket_lo, bracket_hi);
    }
    if (std::fabs(x) < 1e-4) return x;  // bracket pinned against zero
    for (int it = 0; it < 50; ++it) {
        const double curv = upper_curvature(p, x);
        if (!(curv > 0.0) || !std::isfinite(curv)) break;
        double next = x - upper_gradient(c, p, x) / curv;
        if (next < bracket_lo) next = 0.5 * (x + bracket_lo);
        if (next > bracket_hi) next = 0.5 * (x + bracket_hi);
        const double move = std::fabs(next - x);
        x = next;
        if (std::fabs(x) < kSnapToZero) break;  // resolved below
        if (move <= 1e-14 * std::max(1.0, std::fabs(x))) break;
    }
    return x;
}

// Least-squares quadratic fit g ~ q0 + q1*(x-center) + q2*(x-center)^2.
struct QuadraticFit {
    double center = 0.0;
    double q0 = 0.0;
    double q1 = 0.0;
    double q2 = 0.0;
    bool valid = false;
};

QuadraticFit fit_quadratic(const std::vector<double>& xs,
                           const std::vector<double>& gs, int first,
                           int last) {
    QuadraticFit fit;
    const int n = last - first + 1;
    if (n < 3) return fit;
    double center = 0.0;
    for (int i = first; i <= last; ++i) center += xs[i];
    center /= n;
    double s0 = 0, s1 = 0, s2 = 0, s3 = 0, s4 = 0;
    double b0 = 0, b1 = 0, b2 = 0;
    for (int i = first; i <= last; ++i) {
        const double t = xs[i] - center;
        const double t2 = t * t;
        s0 += 1.0;
        s1 += t;
        s2 += t2;
        s3 += t2 * t;
        s4 += t2 * t2;
        b0 += gs[i];
        b1 += gs[i] * t;
        b2 += gs[i] * t2;
    }
    // Solve the 3x3 normal equations by Cramer's rule.
    const double det = s0 * (s2 * s4 - s3 * s3) - s1 * (s1 * s4 - s2 * s3) +
                       s2 * (s1 * s3 - s2 * s2);
    if (!(std::fabs(det) > 1e-30)) return fit;
    const double d0 = b0 * (s2 * s4 - s3 * s3) - s1 * (b1 * s4 - b2 * s3) +
                      s2 * (b1 * s3 - b2 * s2);
    const double d1 = s0 * (b1 * s4 - b2 * s3) - b0 * (s1 * s4 - s2 * s3) +
                      s2 * (s1 * b2 - s2 * b1);
    const double d2 = s0 * (s2 * b2 - s3 * b1) - s1 * (s1 * b2 - s2 * b1) +
                      b0 * (s1 * s3 - s2 * s2);
    fit.center = center;
    fit.q0 = d0 / det;
    fit.q1 = d1 / det;
    fit.q2 = d2 / det;
    fit.valid = std::isfinite(fit.q0) && std::isfinite(fit.q1) &&
                std::isfinite(fit.q2);
    return fit;
}

// Golden-section minimization of a smooth deterministic function.
template <typename F>
double golden_minimize(F&& f, double a, double b, double x_tol) {
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = f(x1);
    double f2 = f(x2);
    while (b - a > x_tol) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace

const char* to_string(SolveMethod method) {
    switch (method) {
        case SolveMethod::LOWER_SURROGATE:
            return "LOWER_SURROGATE";
        case SolveMethod::UPPER_SURROGATE:
            return "UPPER_SURROGATE";
        case SolveMethod::UPPER_UNCONSTRAINED:
            return "UPPER_UNCONSTRAINED";
        case SolveMethod::BROWNIAN:
            return "BROWNIAN";
        case SolveMethod::BACKORDER:
            return "BACKORDER";
    }
    return "UNKNOWN";
}

double kappa_lower(double c, double p) {
    check_cost_pair(c, p);
    require(c < p, "production cost must be below the penalty cost");
    return normal::inv_ccdf(c / p);
}

Solution solve_lower(const CostParams& costs, double sigma, long n_horizon) {
    check_scale(sigma, n_horizon);
    const double kappa = kappa_lower(costs.c, costs.p);
    Solution s;
    s.kappa = kappa;
    s.objective = scale_factor(sigma, n_horizon) *
                  (costs.p * normal::pdf(kappa));
    s.method = SolveMethod::LOWER_SURROGATE;
    return s;
}

Solution solve_upper(const CostParams& costs, double sigma, long n_horizon,
                     bool constrained) {
    check_cost_pair(costs.c, costs.p);
    check_scale(sigma, n_horizon);
    const double c = costs.c;
    const double p = costs.p;
    double kappa;
    if (constrained && p <= 2.0 * c) {
        // F'(0+) = c - p/2 >= 0 and F is convex on kappa > 0, so the
        // constrained minimizer sits exactly at the boundary.
        kappa = 0.0;
    } else if (constrained) {
        kappa = minimize_upper_objective(c, p, 0.0, 8.0, 2048);
    } else {
        kappa = minimize_upper_objective(c, p, -8.0, 8.0, 4096);
    }
    if (std::fabs(kappa) < kSnapToZero) kappa = 0.0;
    Solution s;
    s.kappa = kappa;
    s.objective = scale_factor(sigma, n_horizon) *
                  upper_objective_unit(c, p, kappa);
    s.method = constrained ? SolveMethod::UPPER_SURROGATE
                           : SolveMethod::UPPER_UNCONSTRAINED;
    return s;
}

RatioReport ratio_report(const CostParams& costs, double sigma,
                         long n_horizon) {
    const Solution lower = solve_lower(costs, sigma, n_horizon);
    const Solution upper = solve_upper(costs, sigma, n_horizon, true);
    if (!(lower.kappa <= upper.kappa + 1e-6)) {
        throw numeric_error(
            "surrogate minimizers out of order: the lower-bound band should "
            "never exceed the upper-bound band");
    }
    RatioReport report;
    report.v_lower = lower.objective;
    report.v_upper = upper.objective;
    report.ratio = upper.objective / lower.objective;
    report.ratio_lower_cert = 2.0;
    report.ratio_upper_cert = 2.0 * normal::pdf(0.0) / normal::pdf(lower.kappa);
    return report;
}

BrownianDetail brownian_optimize_detail(const CostParams& costs, double sigma,
                                        long n_horizon, const SimConfig& cfg) {
    check_scale(sigma, n_horizon);
    const double c = costs.c;
    const double p = costs.p;
    const double k_low = kappa_lower(c, p);  // validates 0 < c < p
    const double k_high = solve_upper(costs, 1.0, 1, true).kappa;
    const double lo = k_low - 1.0;
    const double hi = k_high + 1.0;

    // Coarse grid of common-random-number estimates: every evaluation uses
    // cfg's seed, so the noise surface is a fixed (piecewise linear in
    // kappa) function and comparisons between nodes are meaningful.
    constexpr int kCells = 32;
    std::vector<double> xs(kCells + 1);
    std::vector<double> gs(kCells + 1);
    std::vector<McEstimate> rhos(kCells + 1);
    int best = 0;
    for (int i = 0; i <= kCells; ++i) {
        xs[i] = lo + (hi - lo) * (static_cast<double>(i) / kCells);
        rhos[i] = sample_rho(xs[i], cfg);
        gs[i] = c * xs[i] + p * rhos[i].mean;
        if (gs[i] < gs[best]) best = i;
    }

    // Local quadratic smoothing over the seven nodes around the grid
    // minimum, then a golden-section pass on the fitted curve inside the
    // flanking cells; the refined point only replaces the grid winner if
    // the common-random-number objective agrees it is better.
    const int first = std::clamp(best - 3, 0, kCells - 6);
    const int last = first + 6;
    double refined = xs[best];
    const QuadraticFit fit = fit_quadratic(xs, gs, first, last);
    if (fit.valid && fit.q2 > 0.0) {
        const double vertex =
            std::clamp(fit.center - fit.q1 / (2.0 * fit.q2), xs[first],
                       xs[last]);
        const double cell = (hi - lo) / kCells;
        const double a = std::max(lo, vertex - cell);
        const double b = std::min(hi, vertex + cell);
        refined = golden_minimize(
            [&](double x) {
                const double t = x - fit.center;
                return fit.q0 + fit.q1 * t + fit.q2 * t * t;
            },
            a, b, 1e-10);
    }

    double k_star = xs[best];
    McEstimate rho_star = rhos[best];
    if (refined != xs[best]) {
        const McEstimate rho_refined = sample_rho(refined, cfg);
        const double g_refined = c * refined + p * rho_refined.mean;
        if (g_refined <= gs[best]) {
            k_star = refined;
            rho_star = rho_refined;
        }
    }

    const double scale = scale_factor(sigma, n_horizon);
    BrownianDetail detail;
    detail.solution.kappa = k_star;
    detail.solution.objective = scale * (c * k_star + p * rho_star.mean);
    detail.solution.method = SolveMethod::BROWNIAN;
    detail.rho_mean = rho_star.mean;
    detail.rho_std_error = rho_star.std_error;
    detail.objective_std_error = scale * p * rho_star.std_error;
    return detail;
}

Solution brownian_optimize(const CostParams& costs, double sigma,
                           long n_horizon, const SimConfig& cfg) {
    return brownian_optimize_detail(costs, sigma, n_horizon, cfg).solution;
}

CostParams apply_holding(const CostParams& costs) {
    require(std::isfinite(costs.c) && costs.c >= 0.0 &&
                std::isfinite(costs.p) && costs.p >= 0.0 &&
                std::isfinite(costs.h) && costs.h >= 0.0,
            "costs must be nonnegative and finite");
    CostParams out = costs;
    out.c = costs.c + costs.h;
    out.p = costs.p + costs.h;
    out.h = 0.0;
    return out;
}

Solution backorder_solve(const CostParams& costs, double sigma,
                         long n_horizon) {
    require(std::isfinite(costs.c) && costs.c >= 0.0,
            "production cost must be nonnegative and finite");
    require(std::isfinite(costs.b) && costs.b >= 0.0,
            "backlog penalty must be nonnegative and finite");
    require(std::isfinite(costs.h_prime) && costs.h_prime >= 0.0,
            "holding cost must be nonnegative and finite");
    require(costs.c < costs.b,
            "production cost must be below the backlog penalty");
    check_scale(sigma, n_horizon);
    const double c_eff = costs.c + costs.h_prime;
    const double b_eff = costs.b + costs.h_prime;
    require(c_eff > 0.0, "production plus holding cost must be positive");
    const double kappa = normal::inv_ccdf(c_eff / b_eff);
    Solution s;
    s.kappa = kappa;
    s.objective = scale_factor(sigma, n_horizon) *
                  (c_eff * kappa + b_eff * normal::loss(kappa));
    s.method = SolveMethod::BACKORDER;
    return s;
}

std::vector<EquivalencePoint> equivalence_curve(
    double c, double h, const std::vector<double>& p_list, double sigma,
    long n_horizon) {
    require(std::isfinite(c) && c >= 0.0,
            "production cost must be nonnegative and finite");
    require(std::isfinite(h) && h >= 0.0,
            "holding cost must be nonnegative and finite");
    require(c + h > 0.0, "production plus holding cost must be positive");
    check_scale(sigma, n_horizon);
    const double c_eff = c + h;
    std::vector<EquivalencePoint> curve;
    curve.reserve(p_list.size());
    double prev = -1.0;
    for (std::size_t i = 0; i < p_list.size(); ++i) {
        const double p = p_list[i];
        require(std::isfinite(p), "penalty costs must be finite");
        require(i == 0 || p > prev, "penalty list must be strictly ascending");
        prev = p;
        require(p > c, "every penalty must exceed the production cost");
        // The shared optimal band y solves ccdf(y) = (c+h)/(p+h); the ratio
        // divides by y, so the curve is defined only where y > 0.
        require(p + h > 2.0 * c_eff,
                "penalty plus holding must exceed twice the production "
                "plus holding cost");
        const double p_eff = p + h;
        const double y = normal::inv_ccdf(c_eff / p_eff);
        const double lost_sales = c_eff * y + p_eff * normal::loss(y);
        const double backorder = c_eff * y;
        curve.push_back({p, lost_sales / backorder});
    }
    return curve;
}

}  // namespace driftwalk
