#pragma once

// Special functions used by the closed-form outage expressions.

#include <cmath>
#include <limits>

#include "socsec/errors.hpp"

namespace socsec {

/// Gamma law with shape nu and scale theta (mean nu * theta).
struct GammaParams {
  double shape = 1.0;
  double scale = 1.0;

  [[nodiscard]] double mean() const { return shape * scale; }
  [[nodiscard]] double variance() const { return shape * scale * scale; }
};

inline void validate(const GammaParams& p) {
  if (!(p.shape > 0.0) || !(p.scale > 0.0) || !std::isfinite(p.shape) || !std::isfinite(p.scale))
    throw DomainError("Gamma parameters must be positive and finite");
}

inline double log_gamma(double x) {
  if (!(x > 0.0)) throw DomainError("log_gamma defined here for x > 0 only");
  return std::lgamma(x);
}

inline double gamma_pdf(double x, const GammaParams& p) {
  validate(p);
  if (x < 0.0 || std::isnan(x)) throw DomainError("gamma_pdf requires x >= 0");
  if (x == 0.0) {
    if (p.shape < 1.0) return std::numeric_limits<double>::infinity();
    return p.shape == 1.0 ? 1.0 / p.scale : 0.0;
  }
  if (std::isinf(x)) return 0.0;
  const double z = x / p.scale;
  return std::exp((p.shape - 1.0) * std::log(z) - z - log_gamma(p.shape)) / p.scale;
}

namespace detail {

// P(a, x) by the power series; converges quickly for x < a + 1.
inline double lower_gamma_series(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  for (int n = 1; n < 100000; ++n) {
    term *= x / (a + n);
    sum += term;
    if (std::abs(term) < std::abs(sum) * 1e-17) {
      return sum * std::exp(-x + a * std::log(x) - log_gamma(a));
    }
  }
  throw NonConvergent("incomplete gamma series did not converge");
}

// Q(a, x) by the Legendre continued fraction (modified Lentz); x >= a + 1.
inline double upper_gamma_fraction(double a, double x) {
  constexpr double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 100000; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-16) {
      return std::exp(-x + a * std::log(x) - log_gamma(a)) * h;
    }
  }
  throw NonConvergent("incomplete gamma continued fraction did not converge");
}

}  // namespace detail

/// Regularized upper incomplete gamma Q(nu, x) = Gamma(nu, x) / Gamma(nu).
inline double reg_upper_gamma(double nu, double x) {
  if (!(nu > 0.0) || !std::isfinite(nu)) throw DomainError("reg_upper_gamma requires nu > 0");
  if (!(x >= 0.0)) throw DomainError("reg_upper_gamma requires x >= 0");
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  if (x < nu + 1.0) return 1.0 - detail::lower_gamma_series(nu, x);
  return detail::upper_gamma_fraction(nu, x);
}

/// Regularized lower incomplete gamma P(nu, x).
inline double reg_lower_gamma(double nu, double x) {
  if (!(nu > 0.0) || !std::isfinite(nu)) throw DomainError("reg_lower_gamma requires nu > 0");
  if (!(x >= 0.0)) throw DomainError("reg_lower_gamma requires x >= 0");
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  if (x < nu + 1.0) return detail::lower_gamma_series(nu, x);
  return 1.0 - detail::upper_gamma_fraction(nu, x);
}

inline double gamma_cdf(double x, const GammaParams& p) {
  validate(p);
  if (!(x >= 0.0)) return 0.0;
  return reg_lower_gamma(p.shape, x / p.scale);
}

namespace detail {

inline double gauss_series(double a, double b, double c, double x) {
  constexpr long kMaxTerms = 1'000'000;
  double term = 1.0;
  double sum = 1.0;
  for (long k = 0; k < kMaxTerms; ++k) {
    term *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * x;
    sum += term;
    if (term == 0.0 || std::abs(term) < 1e-15 * std::abs(sum)) return sum;
  }
  throw NonConvergent("2F1 series exceeded 1e6 terms");
}

}  // namespace detail

/// Gauss hypergeometric function 2F1(a, b; c; x) for 0 <= x < 1.
///
/// Direct series for x <= 0.75, otherwise the Euler transformation
/// 2F1(a, b; c; x) = (1 - x)^(c - a - b) 2F1(c - a, c - b; c; x),
/// whose terms carry an extra k^(-2(a + b - c)) decay.
inline double hyp2f1(double a, double b, double c, double x) {
  if (!(x >= 0.0 && x < 1.0)) throw DomainError("hyp2f1 requires 0 <= x < 1");
  if (c <= 0.0 && c == std::floor(c)) throw DomainError("hyp2f1 requires c not a nonpositive integer");
  if (x == 0.0) return 1.0;
  if (x <= 0.75) return detail::gauss_series(a, b, c, x);
  return std::pow(1.0 - x, c - a - b) * detail::gauss_series(c - a, c - b, c, x);
}

}  // namespace socsec
