#pragma once

namespace driftwalk::normal {

// Two-sided bracket on the upper tail probability ccdf(x), x > 0, from the
// classical Mills-ratio inequalities
//
//   (1 - 1/x^2) * pdf(x)/x  <=  ccdf(x)  <=  pdf(x)/x ,
//
// with the lower leg clamped at zero (it is vacuous for x <= 1).
struct MillsBracket {
  double lower;
  double upper;
};

// Standard normal density.  Relative error stays at a few ulp through
// |x| = 8 (the squared argument is evaluated with a split-argument scheme for
// moderately large |x| so exp() does not amplify the rounding of x*x).
double pdf(double x);

// Distribution function Phi(x), evaluated via erfc so the lower tail keeps
// full relative accuracy and the upper tail suffers no cancellation.
double cdf(double x);

// Upper tail probability 1 - Phi(x), same accuracy notes as cdf.
double ccdf(double x);

// Upper tail quantile: the x with ccdf(x) = q, for q in (0, 1).
// Rational seed (Acklam) on the canonical side min(q, 1-q), then two Newton
// corrections in ccdf space; the achieved residual |ccdf(x) - q| stays below
// 1e-12 * min(q, 1-q).  inv_ccdf(0.5) returns exactly 0.  Throws
// std::domain_error outside (0, 1).
double inv_ccdf(double q);

// First-order loss function  G(x) = pdf(x) - x * ccdf(x) = E (Z - x)^+ .
// For x >= 12 the true value (< 3e-34) is returned as exactly 0; negative
// arguments use the reflection  G(-x) = G(x) + x.
double loss(double x);

// Definite integral of the loss function,
//
//   int_a^b G(t) dt = ( Phi(b) - Phi(a) + b G(b) - a G(a) ) / 2 ,
//
// where b may be +infinity (x G(x) -> 0 there).  Requires a <= b and a
// finite a: G(t) grows like |t| towards -infinity, so the integral from
// -infinity diverges.  Throws std::domain_error on violations.
double loss_integral(double a, double b);

// Mills-ratio bracket on ccdf(x); requires x > 0 (std::domain_error
// otherwise).
MillsBracket mills_bounds(double x);

}
