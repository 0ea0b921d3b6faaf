// Special-function kernel: log-gamma and the regularized lower incomplete
// gamma pair.  Every density, cdf and volume formula in the library is
// expressed through these three functions.

#pragma once

namespace pball {

// ln Gamma(x) for x > 0.  Accuracy is close to machine precision in relative
// terms; for small arguments (where ln Gamma is O(1)) the absolute error is
// below 1e-13.  Throws std::domain_error for x <= 0.
double log_gamma(double x);

// Regularized lower incomplete gamma P(a,x) = gamma(a,x)/Gamma(a) for a > 0,
// x >= 0.  Series expansion for x < a+1, continued fraction otherwise.
// Monotone nondecreasing in x, P(a,0) = 0, P(a,x) -> 1 as x -> infinity.
double reg_lower_gamma(double a, double x);

// Inverse of P(a,.) in its second argument: returns x >= 0 with P(a,x) = q,
// for 0 <= q < 1, to ~1e-12 relative error.  Safeguarded bisection refined
// by Newton steps.  Throws std::domain_error if q is outside [0,1).
double inv_reg_lower_gamma(double a, double q);

}  // namespace pball
