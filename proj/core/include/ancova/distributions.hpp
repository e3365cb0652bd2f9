#pragma once

#include <cstddef>

namespace ancova {

/// Regularized lower incomplete gamma P(a, x); series for x < a+1,
/// continued fraction otherwise. Absolute error below 1e-12.
double regularized_gamma_p(double a, double x);

/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x).
double regularized_gamma_q(double a, double x);

/// Regularized incomplete beta I_x(a, b) via modified Lentz continued fraction.
double regularized_beta(double x, double a, double b);

/// Survival function of the chi-square distribution with df degrees of freedom.
double chisq_sf(double x, std::size_t df);

/// CDF of the chi-square distribution.
double chisq_cdf(double x, std::size_t df);

/// Survival function of the F distribution with (df1, df2) degrees of freedom.
double f_sf(double x, std::size_t df1, std::size_t df2);

/// Quantile of the standard normal distribution (Wichura's rational
/// approximation). p must lie strictly inside (0, 1).
double normal_quantile(double p);

}  // namespace ancova
