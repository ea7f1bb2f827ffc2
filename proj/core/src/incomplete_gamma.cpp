#include "orderflow/incomplete_gamma.hpp"

#include <cmath>
#include <limits>

#include "orderflow/errors.hpp"

namespace orderflow {

namespace {

constexpr double kRelTol = 1e-10;
constexpr int kMaxIter = 10000;
constexpr double kTiny = 1e-300;

double log_gamma(double a) {
#if defined(__GLIBC__)
  int sign = 0;
  return ::lgamma_r(a, &sign);
#else
  return std::lgamma(a);
#endif
}

// P(a, x) by the lower series: P = x^a e^-x / Gamma(a) * sum_n x^n / (a)_{n+1}.
double lower_series(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  double ap = a;
  for (int n = 0; n < kMaxIter; ++n) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::fabs(term) < std::fabs(sum) * kRelTol) {
      return sum * std::exp(-x + a * std::log(x) - log_gamma(a));
    }
  }
  throw Error(Errc::no_convergence, "incomplete gamma series did not converge");
}

// Q(a, x) by the Lentz continued fraction.
double upper_continued_fraction(double a, double x) {
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= kMaxIter; ++i) {
    double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < kRelTol) {
      return h * std::exp(-x + a * std::log(x) - log_gamma(a));
    }
  }
  throw Error(Errc::no_convergence, "incomplete gamma continued fraction did not converge");
}

}  // namespace

double regularized_gamma_q(double a, double x) {
  if (!(a > 0.0) || x < 0.0 || !std::isfinite(a) || !std::isfinite(x)) {
    throw Error(Errc::invalid_distribution, "regularized_gamma_q requires a > 0, x >= 0");
  }
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - lower_series(a, x);
  return upper_continued_fraction(a, x);
}

double chi_square_upper_tail(double statistic, double dof) {
  return regularized_gamma_q(dof / 2.0, statistic / 2.0);
}

}  // namespace orderflow
