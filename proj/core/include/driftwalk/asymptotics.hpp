#pragma once

namespace driftwalk {

// Drift regime of the walk S_n = sigma*(Z_1+...+Z_n) - kappa*sigma*n^alpha,
// classifying how the expected running maximum E[L_N] grows with the horizon.
enum class Regime {
    LINEAR_POS,  // alpha = 1, kappa > 0: converges to a constant
    LINEAR_NEG,  // alpha = 1, kappa < 0: grows linearly in N
    MID_POS,     // alpha in (1/2, 1), kappa > 0: bounded by constants
    MID_NEG,     // alpha in (1/2, 1), kappa < 0: grows like N^alpha
    LOW_POS,     // alpha in [0, 1/2], kappa > 0: grows like sqrt(N)
    LOW_NEG,     // alpha in [0, 1/2], kappa < 0: grows like sqrt(N)
    ZERO_DRIFT,  // kappa = 0: exactly the reflection-principle sqrt(N) law
};

// Leading growth order of E[L_N] in the horizon N.
enum class GrowthOrder { bounded, sqrt_N, N_alpha, linear_N };

const char* to_string(Regime r);
const char* to_string(GrowthOrder g);

// Two-sided envelope for E[L_N]: closed-form lower and upper values for the
// regime that (alpha, kappa) falls in, plus the growth classification.
struct BoundEstimate {
    double lower = 0.0;
    double upper = 0.0;
    Regime regime = Regime::ZERO_DRIFT;
    GrowthOrder growth_order = GrowthOrder::sqrt_N;
};

// Exact E[L_N] for the linear-drift walk (alpha = 1) as the partial sum
// sum_{n<=N} sigma*G(kappa*sqrt(n))/sqrt(n), where G is the Gaussian loss
// function.  Deterministic; O(N).
double spitzer_exact(double kappa, double sigma, long n_horizon);

// Integral (closed-form) counterpart of spitzer_exact:
// (sigma/kappa)*(Phi(kappa*sqrt(N)) - 1/2) + sigma*sqrt(N)*G(kappa*sqrt(N)).
// Dominates the partial sum for every kappa != 0 and converges to
// sigma/(2*kappa) for kappa > 0.  Throws std::domain_error at kappa = 0; use
// the zero-drift sqrt(N) law instead.
double spitzer_closed(double kappa, double sigma, long n_horizon);

// Lower bound for E[L_N] from the best single period:
// max_{1<=n<=N} sigma*sqrt(n)*G(kappa*n^(alpha-1/2)), exact over the integer
// grid.
double jensen_lower(double alpha, double kappa, double sigma, long n_horizon);

// Positive root of phi(y) = 2*alpha*y*ccdf(y) for alpha in (1/2, 1), found by
// bisection on (0, (2*alpha-1)^(-1/2)] to absolute tolerance 1e-12.
double ystar_root(double alpha);

// Upper bound (2*alpha-1)^(-1/2) for the root above.
double ystar_upper_bound(double alpha);

// Constant bounding E[L_N]/sigma uniformly in N for alpha in (1/2, 1) and
// kappa > 0:  (2/(2a-1)) * kappa^(-3/(2a-1)) * int_0^inf v^((6-6a)/(2a-1))
// phi(v) dv, evaluated by adaptive quadrature.
double c_alpha(double alpha, double kappa);

// Assembles the lower/upper envelope for E[L_N] in the regime selected by
// (alpha, kappa); see the regime enum for the dispatch.
BoundEstimate bound_envelope(double alpha, double kappa, double sigma,
                             long n_horizon);

}  // namespace driftwalk
