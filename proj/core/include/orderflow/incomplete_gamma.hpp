#pragma once

namespace orderflow {

// Regularized upper incomplete gamma Q(a, x) = Gamma(a, x) / Gamma(a) for
// a > 0, x >= 0. Series expansion below x = a + 1, Lentz continued fraction
// above; converged to 1e-10 relative accuracy.
//
// The upper tail of a chi-square distribution with k degrees of freedom at
// statistic t is Q(k / 2, t / 2).
double regularized_gamma_q(double a, double x);

double chi_square_upper_tail(double statistic, double dof);

}  // namespace orderflow
