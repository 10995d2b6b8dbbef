#include "driftwalk/quadrature.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

#include "driftwalk/errors.hpp"

namespace driftwalk::quad {

namespace {

constexpr int kMaxRule = 15;

struct Rule {
  std::array<double, kMaxRule> x{};  // nodes on [-1, 1], ascending
  std::array<double, kMaxRule> w{};
  int n = 0;
};

// n-point Gauss-Legendre rule on [-1, 1]: roots of P_n by Newton iteration
// from the Chebyshev-like initial guess cos(pi (i + 3/4) / (n + 1/2)),
// weights 2 / ((1 - x^2) P_n'(x)^2).  (Numerical Recipes gauleg, in double.)
Rule make_rule(int n) {
  Rule r;
  r.n = n;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double t = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 64; ++it) {
      double p0 = 1.0, p1 = t;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (t * p1 - p0) / (t * t - 1.0);
      double dt = p1 / dp;
      t -= dt;
      if (std::fabs(dt) <= 1e-15 * (1.0 + std::fabs(t))) break;
    }
    // recompute derivative at the converged node for the weight
    double p0 = 1.0, p1 = t;
    for (int k = 2; k <= n; ++k) {
      double p2 = ((2 * k - 1) * t * p1 - (k - 1) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (t * p1 - p0) / (t * t - 1.0);
    double w = 2.0 / ((1.0 - t * t) * dp * dp);
    r.x[i] = -t;  // initial guesses run from +1 down; store ascending
    r.x[n - 1 - i] = t;
    r.w[i] = w;
    r.w[n - 1 - i] = w;
  }
  if (n % 2 == 1) r.x[n / 2] = 0.0;  // kill the -0.0 from the mirroring
  return r;
}

const Rule& rule7() {
  static const Rule r = make_rule(7);
  return r;
}
const Rule& rule15() {
  static const Rule r = make_rule(15);
  return r;
}

double apply(const Rule& r, const std::function<double(double)>& f, double a,
             double b) {
  double c = 0.5 * (a + b);
  double h = 0.5 * (b - a);
  double s = 0.0;
  for (int i = 0; i < r.n; ++i) s += r.w[i] * f(c + h * r.x[i]);
  return s * h;
}

double recurse(const std::function<double(double)>& f, double a, double b,
               double tol, int depth) {
  double coarse = apply(rule7(), f, a, b);
  double fine = apply(rule15(), f, a, b);
  double err = std::fabs(fine - coarse);
  if (err <= tol || !(std::isfinite(fine))) return fine;
  if (depth <= 0) {
    if (err > 64.0 * tol) {
      throw numeric_error("quad::integrate: refinement limit reached with the "
                          "error estimate far above tolerance");
    }
    return fine;
  }
  double m = 0.5 * (a + b);
  return recurse(f, a, m, 0.5 * tol, depth - 1) +
         recurse(f, m, b, 0.5 * tol, depth - 1);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol, int max_depth) {
  if (std::isnan(a) || std::isnan(b) || std::isinf(a) || std::isinf(b)) {
    throw std::domain_error("quad::integrate: finite interval required");
  }
  if (!(abs_tol > 0.0)) {
    throw std::domain_error("quad::integrate: abs_tol must be positive");
  }
  if (a == b) return 0.0;
  if (a > b) return -integrate(f, b, a, abs_tol, max_depth);
  return recurse(f, a, b, abs_tol, max_depth);
}

}  // namespace driftwalk::quad
