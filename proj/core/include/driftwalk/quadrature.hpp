#pragma once

#include <functional>

namespace driftwalk::quad {

// Adaptive quadrature over a finite interval with an embedded Gauss(7) /
// Gauss(15) pair: the 15-point rule supplies the value on each subinterval,
// the difference against the 7-point rule the error estimate, and intervals
// are bisected (Gauss-Kronrod style error control) until the estimate drops
// below the interval's share of abs_tol.  Nodes and weights are generated on
// first use by Newton iteration on the Legendre polynomials, so no
// transcribed coefficient tables are involved.
//
// Intended for smooth integrands (everything integrated in this library is
// analytic).  Throws driftwalk::numeric_error if the recursion bottoms out
// with an error estimate still far above tolerance.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol, int max_depth = 48);

}
