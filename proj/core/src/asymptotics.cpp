#include "driftwalk/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "driftwalk/errors.hpp"
#include "driftwalk/normal.hpp"
#include "driftwalk/quadrature.hpp"

namespace driftwalk {

namespace {

constexpr double kLnSqrt2Pi = 0.9189385332046727;  // ln(sqrt(2*pi))

void check_horizon(long n_horizon) {
    if (n_horizon < 1) {
        throw std::domain_error("horizon must be >= 1");
    }
}

void check_sigma(double sigma) {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        throw std::domain_error("sigma must be positive and finite");
    }
}

void check_alpha_range(double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
        throw std::domain_error("alpha must lie in [0, 1]");
    }
}

void check_kappa(double kappa) {
    if (!std::isfinite(kappa)) {
        throw std::domain_error("kappa must be finite");
    }
}

void check_mid_alpha(double alpha) {
    if (!(alpha > 0.5 && alpha < 1.0)) {
        throw std::domain_error("alpha must lie strictly inside (1/2, 1)");
    }
}

// Single-period expected overshoot sqrt(n) * G(kappa * n^(alpha - 1/2)) in
// units of sigma.
double period_overshoot(double n, double kappa, double alpha_minus_half) {
    return std::sqrt(n) * normal::loss(kappa * std::pow(n, alpha_minus_half));
}

}  // namespace

const char* to_string(Regime r) {
    switch (r) {
        case Regime::LINEAR_POS: return "LINEAR_POS";
        case Regime::LINEAR_NEG: return "LINEAR_NEG";
        case Regime::MID_POS: return "MID_POS";
        case Regime::MID_NEG: return "MID_NEG";
        case Regime::LOW_POS: return "LOW_POS";
        case Regime::LOW_NEG: return "LOW_NEG";
        case Regime::ZERO_DRIFT: return "ZERO_DRIFT";
    }
    return "UNKNOWN";
}

const char* to_string(GrowthOrder g) {
    switch (g) {
        case GrowthOrder::bounded: return "bounded";
        case GrowthOrder::sqrt_N: return "sqrt_N";
        case GrowthOrder::N_alpha: return "N_alpha";
        case GrowthOrder::linear_N: return "linear_N";
    }
    return "unknown";
}

double spitzer_exact(double kappa, double sigma, long n_horizon) {
    check_kappa(kappa);
    check_sigma(sigma);
    check_horizon(n_horizon);
    // Neumaier-compensated sum of G(kappa*sqrt(n))/sqrt(n).
    double sum = 0.0;
    double comp = 0.0;
    for (long n = 1; n <= n_horizon; ++n) {
        const double rn = std::sqrt(static_cast<double>(n));
        const double term = normal::loss(kappa * rn) / rn;
        const double t = sum + term;
        if (std::abs(sum) >= std::abs(term)) {
            comp += (sum - t) + term;
        } else {
            comp += (term - t) + sum;
        }
        sum = t;
    }
    return sigma * (sum + comp);
}

double spitzer_closed(double kappa, double sigma, long n_horizon) {
    check_kappa(kappa);
    check_sigma(sigma);
    check_horizon(n_horizon);
    if (kappa == 0.0) {
        throw std::domain_error(
            "kappa must be nonzero; use the zero-drift sqrt(N) law instead");
    }
    const double root_n = std::sqrt(static_cast<double>(n_horizon));
    const double x = kappa * root_n;
    return sigma / kappa * (0.5 - normal::ccdf(x)) +
           sigma * root_n * normal::loss(x);
}

double jensen_lower(double alpha, double kappa, double sigma, long n_horizon) {
    check_alpha_range(alpha);
    check_kappa(kappa);
    check_sigma(sigma);
    check_horizon(n_horizon);

    const double a = alpha - 0.5;
    const double nd = static_cast<double>(n_horizon);

    // The integer maximum is scanned directly for modest horizons.  For huge
    // horizons the map n -> sqrt(n)*G(kappa*n^(alpha-1/2)) is monotone
    // increasing except when kappa > 0 and alpha > 1/2 (where it is
    // unimodal), so a golden-section pass plus a local integer scan is exact.
    constexpr long kScanLimit = 1L << 20;
    if (n_horizon <= kScanLimit) {
        double best = 0.0;
        for (long n = 1; n <= n_horizon; ++n) {
            best = std::max(best,
                            period_overshoot(static_cast<double>(n), kappa, a));
        }
        return sigma * best;
    }
    if (!(kappa > 0.0 && alpha > 0.5)) {
        return sigma * period_overshoot(nd, kappa, a);
    }

    const double inv_golden = 0.6180339887498949;
    double lo = 1.0, hi = nd;
    double x1 = hi - inv_golden * (hi - lo);
    double x2 = lo + inv_golden * (hi - lo);
    double f1 = period_overshoot(x1, kappa, a);
    double f2 = period_overshoot(x2, kappa, a);
    while (hi - lo > 0.25) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_golden * (hi - lo);
            f2 = period_overshoot(x2, kappa, a);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_golden * (hi - lo);
            f1 = period_overshoot(x1, kappa, a);
        }
    }
    const long center = static_cast<long>(std::llround(0.5 * (lo + hi)));
    double best = std::max(period_overshoot(1.0, kappa, a),
                           period_overshoot(nd, kappa, a));
    for (long n = std::max(1L, center - 3);
         n <= std::min(n_horizon, center + 3); ++n) {
        best = std::max(best,
                        period_overshoot(static_cast<double>(n), kappa, a));
    }
    return sigma * best;
}

double ystar_upper_bound(double alpha) {
    check_mid_alpha(alpha);
    return 1.0 / std::sqrt(2.0 * alpha - 1.0);
}

double ystar_root(double alpha) {
    check_mid_alpha(alpha);
    const auto g = [alpha](double y) {
        return normal::pdf(y) - 2.0 * alpha * y * normal::ccdf(y);
    };
    double lo = 1e-8;
    double hi = ystar_upper_bound(alpha);
    if (!(g(lo) > 0.0) || !(g(hi) < 0.0)) {
        throw numeric_error("balance equation not bracketed on (0, ybar]");
    }
    while (hi - lo > 1e-12) {
        const double mid = 0.5 * (lo + hi);
        if (g(mid) > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double c_alpha(double alpha, double kappa) {
    check_mid_alpha(alpha);
    if (!(kappa > 0.0) || !std::isfinite(kappa)) {
        throw std::domain_error("kappa must be positive and finite");
    }
    const double two_am1 = 2.0 * alpha - 1.0;
    const double m = (6.0 - 6.0 * alpha) / two_am1;

    // Half-Gaussian moment int_0^40 v^m phi(v) dv under v = u^3, which turns
    // the fractional-power endpoint (v^m has unbounded derivatives at 0 for
    // non-integer m) into the smooth integrand 3 u^(3m+2) phi(u^3).  The
    // exponent q = 3m+2 is kept in log form so large m does not overflow
    // intermediates; the peak sits at u = q^(1/6).
    const double q = 3.0 * m + 2.0;
    const auto f = [q](double u) {
        if (u <= 0.0) return 0.0;
        const double u3 = u * u * u;
        return 3.0 * std::exp(q * std::log(u) - 0.5 * u3 * u3 - kLnSqrt2Pi);
    };
    const double u_max = std::cbrt(40.0);
    const double fpeak = f(std::pow(q, 1.0 / 6.0));
    if (!std::isfinite(fpeak)) {
        throw numeric_error(
            "moment integrand exceeds double range for alpha this close to "
            "1/2");
    }
    // Two passes: a coarse one to learn the integral's magnitude, then the
    // final one with the absolute tolerance scaled to it (the moment spans
    // hundreds of orders of magnitude across alpha).
    const double coarse =
        quad::integrate(f, 0.0, u_max, 1e-3 * std::max(fpeak, 1e-300));
    const double integral = quad::integrate(
        f, 0.0, u_max, 1e-10 * std::max(1.0, std::abs(coarse)));

    return 2.0 / two_am1 * std::pow(kappa, -3.0 / two_am1) * integral;
}

BoundEstimate bound_envelope(double alpha, double kappa, double sigma,
                             long n_horizon) {
    check_alpha_range(alpha);
    check_kappa(kappa);
    check_sigma(sigma);
    check_horizon(n_horizon);

    const double nd = static_cast<double>(n_horizon);
    const double root_n = std::sqrt(nd);
    const double sqrt_law = 2.0 * sigma * normal::loss(0.0) * root_n;

    BoundEstimate out;
    if (kappa == 0.0) {
        out.lower = sqrt_law;
        out.upper = sqrt_law;
        out.regime = Regime::ZERO_DRIFT;
        out.growth_order = GrowthOrder::sqrt_N;
        return out;
    }

    if (alpha == 1.0) {
        out.lower = spitzer_exact(kappa, sigma, n_horizon);
        out.upper = spitzer_closed(kappa, sigma, n_horizon);
        if (kappa > 0.0) {
            out.regime = Regime::LINEAR_POS;
            out.growth_order = GrowthOrder::bounded;
        } else {
            out.regime = Regime::LINEAR_NEG;
            out.growth_order = GrowthOrder::linear_N;
        }
        return out;
    }

    if (alpha > 0.5) {
        if (kappa > 0.0) {
            out.regime = Regime::MID_POS;
            out.growth_order = GrowthOrder::bounded;
            out.upper = sigma * c_alpha(alpha, kappa);
            if (nd >= ystar_upper_bound(alpha)) {
                const double ystar = ystar_root(alpha);
                out.lower = sigma *
                            std::pow(ystar / kappa, 1.0 / (2.0 * alpha - 1.0)) *
                            normal::loss(ystar);
            } else {
                out.lower = jensen_lower(alpha, kappa, sigma, n_horizon);
            }
        } else {
            out.regime = Regime::MID_NEG;
            out.growth_order = GrowthOrder::N_alpha;
            const double drift = sigma * std::abs(kappa) * std::pow(nd, alpha);
            out.lower = drift;
            out.upper = sqrt_law + drift;
        }
        return out;
    }

    if (kappa > 0.0) {
        out.regime = Regime::LOW_POS;
        out.growth_order = GrowthOrder::sqrt_N;
        // Best-single-period lower bound; at alpha = 1/2 it reduces to the
        // closed form sigma*sqrt(N)*G(kappa) attained at n = N.
        out.lower = jensen_lower(alpha, kappa, sigma, n_horizon);
        // Replacing the n^alpha band with the straight line of slope
        // N^(alpha-1) can only lower supply for n <= N, so the linear-drift
        // closed form evaluated at kappa*N^(alpha-1) is a valid upper bound;
        // the zero-drift sqrt(N) law caps it.
        const double theta = std::pow(nd, alpha - 1.0);
        out.upper =
            std::min(spitzer_closed(kappa * theta, sigma, n_horizon), sqrt_law);
    } else {
        out.regime = Regime::LOW_NEG;
        out.growth_order = GrowthOrder::sqrt_N;
        out.lower = (alpha == 0.5) ? sigma * root_n * normal::loss(kappa)
                                   : sigma * root_n * normal::loss(0.0);
        out.upper = sqrt_law + sigma * std::abs(kappa) * std::pow(nd, alpha);
    }
    return out;
}

}  // namespace driftwalk
