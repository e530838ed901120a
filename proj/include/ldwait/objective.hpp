#pragma once

// The concave exponent of the waiting-time series,
//
//   f_n(x) = -ln B(x + 1, n - 1) - x c0,      c0 = -(1+q) ln(1-p) > 0,
//   g_n    = p^n (1-p)^{nq} / (n - 1),
//
// so that P(z_{n+1}/Z_n > q) is comparable to sum_{k>=0} g_n exp(f_n(k)).
// Derivatives are differences of polygamma values:
//   f'   = psi_0(x+n) - psi_0(x+1) - c0 =  sum_{y=1}^{n-1} 1/(x+y) - c0
//   f''  = psi_1(x+n) - psi_1(x+1)      = -sum_{y=1}^{n-1} 1/(x+y)^2
//   f''' = psi_2(x+n) - psi_2(x+1)      =  sum_{y=1}^{n-1} 2/(x+y)^3

#include <cmath>
#include <cstdint>
#include <limits>

#include "ldwait/error.hpp"
#include "ldwait/rate.hpp"
#include "ldwait/specfun.hpp"

namespace ldwait::objective {

inline constexpr double kDefaultBeta = 0.75;

class ObjectiveParams {
 public:
  ObjectiveParams(double p, double q, std::int64_t n) : p_(p), q_(q), n_(n) {
    if (!(p > 0.0 && p < 1.0)) throw domain_error("p must lie in (0, 1)");
    if (!(q > 0.0) || !std::isfinite(q)) throw domain_error("q must be finite and > 0");
    if (n < 2) throw domain_error("n must be >= 2");
    c0_ = (1.0 + q) * -std::log1p(-p);
  }

  double p() const { return p_; }
  double q() const { return q_; }
  std::int64_t n() const { return n_; }
  double c0() const { return c0_; }
  double gap() const { return static_cast<double>(n_ - 1); }

 private:
  double p_;
  double q_;
  std::int64_t n_;
  double c0_;
};

struct MaximizerResult {
  double x_star = 0.0;
  double f_at_max = 0.0;
  double f2_at_max = 0.0;
  double sigma = 0.0;
  int iterations = 0;
  bool boundary_max = false;
};

namespace detail {
inline void check_x(double x) {
  if (!(x >= 0.0) || !std::isfinite(x)) throw domain_error("x must be finite and >= 0");
}
}  // namespace detail

inline double f(const ObjectiveParams& params, double x) {
  detail::check_x(x);
  return -specfun::log_beta(x + 1.0, params.gap()) - x * params.c0();
}

inline double f_prime(const ObjectiveParams& params, double x) {
  detail::check_x(x);
  return specfun::polygamma_difference(0, x + 1.0, params.gap()) - params.c0();
}

inline double f_second(const ObjectiveParams& params, double x) {
  detail::check_x(x);
  return specfun::polygamma_difference(1, x + 1.0, params.gap());
}

/// sup |f'''| over [lo, hi]. f''' is a positive sum that decreases in x, so
/// the supremum sits at the left endpoint.
inline double f_third_sup(const ObjectiveParams& params, double lo, double hi) {
  if (!(lo >= 0.0) || !(hi > lo) || !std::isfinite(lo)) {
    throw domain_error("f_third_sup needs 0 <= lo < hi");
  }
  return std::abs(specfun::polygamma_difference(2, lo + 1.0, params.gap()));
}

inline double log_g(const ObjectiveParams& params) {
  const double n = static_cast<double>(params.n());
  return n * std::log(params.p()) + n * params.q() * std::log1p(-params.p()) -
         std::log(n - 1.0);
}

/// Starting guess C (n - 2) - 1 for the maximizer, from the integral
/// approximation of the harmonic sum in f'.
inline double initial_guess(const ObjectiveParams& params) {
  const double c = rate::big_c({params.p(), params.q()});
  return c * static_cast<double>(params.n() - 2) - 1.0;
}

/// Unique maximizer of f on [0, inf) by bisection on the decreasing f'.
inline MaximizerResult maximize(const ObjectiveParams& params) {
  MaximizerResult out;
  const double tol = 1e-10 * (1.0 + params.c0());
  if (f_prime(params, 0.0) <= 0.0) {
    out.boundary_max = true;
    out.x_star = 0.0;
  } else {
    // f' > 0 at lo, f' <= 0 at hi.
    double lo = 0.0;
    double hi = std::max(initial_guess(params), 1.0);
    while (f_prime(params, hi) > 0.0) {
      lo = hi;
      hi *= 2.0;
      ++out.iterations;
      if (!std::isfinite(hi)) throw numerical_error("maximizer bracket expansion overflowed");
    }
    for (double cand = hi / 2.0; cand > lo; cand /= 2.0) {
      if (f_prime(params, cand) > 0.0) {
        lo = cand;
        break;
      }
      hi = cand;
      ++out.iterations;
    }
    double mid = 0.5 * (lo + hi);
    for (int it = 0; it < 400; ++it) {
      mid = 0.5 * (lo + hi);
      const double d = f_prime(params, mid);
      ++out.iterations;
      if (std::abs(d) <= tol || mid <= lo || mid >= hi) break;
      (d > 0.0 ? lo : hi) = mid;
    }
    out.x_star = mid;
  }
  out.f_at_max = f(params, out.x_star);
  out.f2_at_max = f_second(params, out.x_star);
  out.sigma = 1.0 / std::sqrt(-out.f2_at_max);
  return out;
}

}  // namespace ldwait::objective
