#pragma once

namespace epitail {

/// Complementary error function, rational Chebyshev approximations after
/// W. J. Cody (Math. Comp. 23, 1969). Relative accuracy a few ulp across
/// the whole tail until the result leaves the normal double range near
/// z = 26.5; erfc(-z) = 2 - erfc(z) holds by construction.
double erfc(double z);

/// Scaled complement exp(z^2) * erfc(z). Stays O(1/z) for large z, which
/// is what far-tail ratios (lognormal failure rate) need.
double erfcx(double z);

/// Error function, same approximation family.
double erf(double z);

/// Regularized upper incomplete gamma Q(a, x) = Gamma(a,x) / Gamma(a),
/// a > 0, x >= 0. Series for x < a + 1, Lentz continued fraction above.
double regularized_gamma_q(double a, double x);

/// Regularized lower incomplete gamma P(a, x) = 1 - Q(a, x).
double regularized_gamma_p(double a, double x);

/// Continued-fraction factor H in Gamma(a, x) = exp(-x) * x^a * H(a, x),
/// valid for x >= a + 1. H ~ 1/x as x -> infinity, so ratios against
/// exp(-x) x^(a-1) never overflow.
double upper_gamma_cf(double a, double x);

/// log Gamma(a, x) (unregularized upper incomplete), overflow-safe.
double log_upper_gamma(double a, double x);

}  // namespace epitail
