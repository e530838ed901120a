#pragma once

// Closed-form large-deviation rate of P(z_{n+1} / Z_n > q) for a marked
// symbol of probability p:
//
//   C(q)  = 1 / ((1-p)^{-(1+q)} - 1)
//   I(q)  = -(C+1) ln(C+1) + C ln C - ln p - ((1+q) C + q) ln(1-p),  q > 0
//   I(q)  = +inf,                                                   q <= 0

#include <cmath>
#include <limits>
#include <optional>

#include "ldwait/error.hpp"

namespace ldwait::rate {

struct RatePoint {
  double p;
  double q;
};

struct RateEval {
  double q = 0.0;
  double rate = std::numeric_limits<double>::infinity();
  // Present only for q > 0.
  std::optional<double> big_c;
  std::optional<double> rate_prime;
  std::optional<double> rate_second;
  std::optional<double> log_decay;
  double asymptote = 0.0;
};

namespace detail {

inline void check_point(const RatePoint& pt) {
  if (!(pt.p > 0.0 && pt.p < 1.0)) throw domain_error("p must lie in (0, 1)");
  if (!std::isfinite(pt.q)) throw domain_error("q must be finite");
}

inline void check_positive_q(const RatePoint& pt) {
  check_point(pt);
  if (!(pt.q > 0.0)) throw domain_error("q must be > 0");
}

// -ln(1-p) > 0
inline double neg_log_complement(double p) { return -std::log1p(-p); }

// x ln x with the x -> 0+ limit.
inline double xlogx(double x) { return x == 0.0 ? 0.0 : x * std::log(x); }

}  // namespace detail

/// C_p(q). The denominator (1-p)^{-(1+q)} - 1 is formed with expm1 so it
/// stays accurate as q -> 0; C underflows to 0 for very large q.
inline double big_c(const RatePoint& pt) {
  detail::check_positive_q(pt);
  const double denom = std::expm1((pt.q + 1.0) * detail::neg_log_complement(pt.p));
  return 1.0 / denom;
}

inline double rate_i(const RatePoint& pt) {
  detail::check_point(pt);
  if (pt.q <= 0.0) return std::numeric_limits<double>::infinity();
  const double c = big_c(pt);
  const double l = detail::neg_log_complement(pt.p);
  return -(c + 1.0) * std::log1p(c) + detail::xlogx(c) - std::log(pt.p) +
         ((1.0 + pt.q) * c + pt.q) * l;
}

/// I'(q) = -(C + 1) ln(1-p), strictly positive.
inline double rate_i_prime(const RatePoint& pt) {
  const double c = big_c(pt);
  return (c + 1.0) * detail::neg_log_complement(pt.p);
}

/// I''(q) = -(1-p)^{-(1+q)} (C ln(1-p))^2, strictly negative.
///
/// Uses (1-p)^{-(1+q)} = (C+1)/C, giving -ln(1-p)^2 C (C+1), which avoids the
/// overflow-times-underflow product of the textbook form at large q.
inline double rate_i_second(const RatePoint& pt) {
  const double c = big_c(pt);
  const double l = detail::neg_log_complement(pt.p);
  return -l * l * c * (c + 1.0);
}

/// Large-q asymptote -q ln(1-p) - ln p.
inline double asymptote(const RatePoint& pt) {
  detail::check_point(pt);
  return pt.q * detail::neg_log_complement(pt.p) - std::log(pt.p);
}

inline RateEval evaluate(const RatePoint& pt) {
  detail::check_point(pt);
  RateEval out;
  out.q = pt.q;
  out.asymptote = asymptote(pt);
  if (pt.q <= 0.0) return out;
  out.big_c = big_c(pt);
  out.rate = rate_i(pt);
  out.rate_prime = rate_i_prime(pt);
  out.rate_second = rate_i_second(pt);
  out.log_decay = -out.rate;
  return out;
}

}  // namespace ldwait::rate
