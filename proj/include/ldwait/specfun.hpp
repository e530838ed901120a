#pragma once

// Log-Gamma, log-Beta and polygamma functions of orders 0..2 for positive
// real arguments.
//
// Every routine follows the same pattern: move the argument upward with the
// recurrence psi_n(x+1) = psi_n(x) + (-1)^n n! / x^(n+1) (or its log-Gamma
// analogue) until x >= kAsymptoticThreshold, then apply the Stirling /
// Bernoulli-number asymptotic series. Eight Bernoulli terms at x >= 12 leave a
// truncation error below 1e-19.

#include <array>
#include <cmath>
#include <numbers>

#include "ldwait/error.hpp"

namespace ldwait::specfun {

inline constexpr double kAsymptoticThreshold = 12.0;

namespace detail {

// B_2, B_4, ..., B_16
inline constexpr std::array<double, 8> kBernoulli = {
    1.0 / 6.0,     -1.0 / 30.0,     1.0 / 42.0, -1.0 / 30.0,
    5.0 / 66.0,    -691.0 / 2730.0, 7.0 / 6.0,  -3617.0 / 510.0,
};

inline constexpr double kEulerGamma = 0.57721566490153286061;
inline constexpr double kHalfLog2Pi = 0.91893853320467274178;

inline void check_argument(double x) {
  if (!std::isfinite(x) || !(x > 0.0)) {
    throw domain_error("special function argument must be finite and > 0");
  }
}

// Stirling remainder: lnGamma(x) - [(x - 1/2) ln x - x + ln(2 pi)/2].
inline double stirling_remainder(double x) {
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  double power = inv;
  double sum = 0.0;
  for (std::size_t k = 1; k <= kBernoulli.size(); ++k) {
    const double two_k = 2.0 * static_cast<double>(k);
    sum += kBernoulli[k - 1] / (two_k * (two_k - 1.0)) * power;
    power *= inv2;
  }
  return sum;
}

// zeta(k) for k >= 2: direct sum to N-1 plus the Euler-Maclaurin tail.
inline double zeta(int k) {
  constexpr int kDirect = 16;
  double sum = 0.0;
  for (int j = kDirect - 1; j >= 1; --j) sum += std::pow(static_cast<double>(j), -k);
  const double n = kDirect;
  double tail = std::pow(n, 1 - k) / (k - 1) + 0.5 * std::pow(n, -k);
  // B_{2m}/(2m)! * k(k+1)...(k+2m-2) * N^{-k-2m+1}
  double rising = k;
  double factorial = 2.0;
  double power = std::pow(n, -k - 1);
  for (int m = 1; m <= 6; ++m) {
    tail += kBernoulli[m - 1] / factorial * rising * power;
    rising *= (k + 2 * m - 1) * (k + 2 * m);
    factorial *= (2 * m + 1) * (2 * m + 2);
    power /= n * n;
  }
  return sum + tail;
}

inline constexpr int kSeriesTerms = 64;

// Coefficients (-1)^k zeta(k) / k of the Taylor series of lnGamma(1+z).
inline const std::array<double, kSeriesTerms + 1>& log_gamma_series_coeffs() {
  static const std::array<double, kSeriesTerms + 1> coeffs = [] {
    std::array<double, kSeriesTerms + 1> c{};
    for (int k = 2; k <= kSeriesTerms; ++k) {
      c[k] = ((k % 2 == 0) ? 1.0 : -1.0) * zeta(k) / k;
    }
    return c;
  }();
  return coeffs;
}

// lnGamma(1 + z) for |z| <= 1/2, accurate relative to its own magnitude
// (the function vanishes at z = 0).
inline double log_gamma_1p(double z) {
  const auto& c = log_gamma_series_coeffs();
  double sum = 0.0;
  double power = z * z;
  for (int k = 2; k <= kSeriesTerms; ++k) {
    const double term = c[k] * power;
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    power *= z;
  }
  return -kEulerGamma * z + sum;
}

// Value of (-1)^n n! / x^(n+1): psi_n(x+1) - psi_n(x).
inline double recurrence_step(int order, double x) {
  const double inv = 1.0 / x;
  switch (order) {
    case 0: return inv;
    case 1: return -inv * inv;
    default: return 2.0 * inv * inv * inv;
  }
}

inline double polygamma_asymptotic(int order, double x) {
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  double sum = 0.0;
  switch (order) {
    case 0: {
      double power = inv2;
      for (std::size_t k = 1; k <= kBernoulli.size(); ++k) {
        sum += kBernoulli[k - 1] / (2.0 * k) * power;
        power *= inv2;
      }
      return std::log(x) - 0.5 * inv - sum;
    }
    case 1: {
      double power = inv2 * inv;
      for (std::size_t k = 1; k <= kBernoulli.size(); ++k) {
        sum += kBernoulli[k - 1] * power;
        power *= inv2;
      }
      return inv + 0.5 * inv2 + sum;
    }
    default: {
      double power = inv2 * inv2;
      for (std::size_t k = 1; k <= kBernoulli.size(); ++k) {
        sum += (2.0 * k + 1.0) * kBernoulli[k - 1] * power;
        power *= inv2;
      }
      return -inv2 - inv2 * inv - sum;
    }
  }
}

// psi_n(a + gap) - psi_n(a) for a, a + gap >= threshold. The leading terms
// are rewritten so the gap factors out and no large values cancel.
inline double polygamma_asymptotic_difference(int order, double a, double gap) {
  const double b = a + gap;
  const double ia = 1.0 / a;
  const double ib = 1.0 / b;
  const double ia2 = ia * ia;
  const double ib2 = ib * ib;
  double sum = 0.0;
  switch (order) {
    case 0: {
      double pa = ia2, pb = ib2;
      for (std::size_t k = 1; k <= kBernoulli.size(); ++k) {
        sum += kBernoulli[k - 1] / (2.0 * k) * (pb - pa);
        pa *= ia2;
        pb *= ib2;
      }
      return std::log1p(gap * ia) + 0.5 * gap * ia * ib - sum;
    }
    case 1: {
      double pa = ia2 * ia, pb = ib2 * ib;
      for (std::size_t k = 1; k <= kBernoulli.size(); ++k) {
        sum += kBernoulli[k - 1] * (pb - pa);
        pa *= ia2;
        pb *= ib2;
      }
      return -gap * ia * ib - 0.5 * gap * (a + b) * ia2 * ib2 + sum;
    }
    default: {
      double pa = ia2 * ia2, pb = ib2 * ib2;
      for (std::size_t k = 1; k <= kBernoulli.size(); ++k) {
        sum += (2.0 * k + 1.0) * kBernoulli[k - 1] * (pb - pa);
        pa *= ia2;
        pb *= ib2;
      }
      return gap * (a + b) * ia2 * ib2 +
             gap * (a * a + a * b + b * b) * ia2 * ia * ib2 * ib - sum;
    }
  }
}

inline void check_order(int order) {
  if (order < 0 || order > 2) throw domain_error("polygamma order must be 0, 1 or 2");
}

}  // namespace detail

/// ln Gamma(x) for x > 0.
inline double log_gamma(double x) {
  detail::check_argument(x);
  if (x == 1.0 || x == 2.0) return 0.0;
  if (x < 0.5) return detail::log_gamma_1p(x) - std::log(x);
  if (x <= 1.5) return detail::log_gamma_1p(x - 1.0);
  if (x < 2.5) return std::log1p(x - 2.0) + detail::log_gamma_1p(x - 2.0);

  double product = 1.0;
  while (x < kAsymptoticThreshold) {
    product *= x;
    x += 1.0;
  }
  const double stirling =
      (x - 0.5) * std::log(x) - x + detail::kHalfLog2Pi + detail::stirling_remainder(x);
  return stirling - std::log(product);
}

/// ln B(x, y) = ln Gamma(x) + ln Gamma(y) - ln Gamma(x + y).
///
/// Evaluated without forming the three log-Gamma values: both arguments are
/// moved above the asymptotic threshold with B(a,b) = B(a+1,b) (a+b)/a and
/// the Stirling expressions are then combined analytically, so the absolute
/// error stays at a few ulps of the result even when ln Gamma(x + y) is many
/// orders of magnitude larger than ln B.
inline double log_beta(double x, double y) {
  detail::check_argument(x);
  detail::check_argument(y);
  double shift = 0.0;
  while (x < kAsymptoticThreshold) {
    shift += std::log1p(y / x);
    x += 1.0;
  }
  while (y < kAsymptoticThreshold) {
    shift += std::log1p(x / y);
    y += 1.0;
  }
  const double s = x + y;
  const double main = -(x - 0.5) * std::log1p(y / x) - (y - 0.5) * std::log1p(x / y) -
                      0.5 * std::log(s) + detail::kHalfLog2Pi;
  const double remainder = detail::stirling_remainder(x) + detail::stirling_remainder(y) -
                           detail::stirling_remainder(s);
  return main + remainder + shift;
}

/// psi_order(x), the (order+1)-th derivative of ln Gamma, for order in {0,1,2}.
inline double polygamma(int order, double x) {
  detail::check_order(order);
  detail::check_argument(x);
  double shift = 0.0;
  while (x < kAsymptoticThreshold) {
    shift -= detail::recurrence_step(order, x);
    x += 1.0;
  }
  return shift + detail::polygamma_asymptotic(order, x);
}

/// psi_order(x + gap) - psi_order(x) for gap >= 0.
///
/// For integer gap this equals the finite sum
/// sum_{j=0}^{gap-1} (-1)^order order! / (x+j)^(order+1), but it costs O(1)
/// and keeps full relative accuracy when the difference is tiny compared to
/// psi_order(x) itself.
inline double polygamma_difference(int order, double x, double gap) {
  detail::check_order(order);
  detail::check_argument(x);
  if (!std::isfinite(gap) || gap < 0.0) throw domain_error("gap must be finite and >= 0");
  if (gap == 0.0) return 0.0;
  double a = x;
  double b = x + gap;
  double shift = 0.0;
  while (a < kAsymptoticThreshold) {
    shift += detail::recurrence_step(order, a);
    a += 1.0;
    gap -= 1.0;
  }
  while (b < kAsymptoticThreshold) {
    shift -= detail::recurrence_step(order, b);
    b += 1.0;
    gap += 1.0;
  }
  return shift + detail::polygamma_asymptotic_difference(order, a, gap);
}

}  // namespace ldwait::specfun
