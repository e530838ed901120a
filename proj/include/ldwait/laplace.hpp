#pragma once

// Laplace's method for int_I exp(F(x)) dx with F concave, plus the
// diagnostics that control its error and a certified quadrature to check it.
//
// With x* the maximizer, sigma = (-F''(x*))^{-1/2}, a window radius r and
// eta = sup |F'''| on the window, the method is
//
//   int_I e^F ~ sqrt(2 pi) sigma e^{F(x*)}             (window inside I)
//   int_I e^F ~ sqrt(pi / 2) sigma e^{F(x*)}           (x* on an end of I)
//
// and delta = sigma^2 r eta bounds the relative size of the cubic Taylor term
// against the quadratic one on the window.

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <string>

#include "ldwait/error.hpp"
#include "ldwait/exactseries.hpp"
#include "ldwait/log_sum.hpp"
#include "ldwait/objective.hpp"

namespace ldwait::laplace {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Closed interval [lo, hi]; either end may be infinite.
struct Interval {
  double lo = -kInf;
  double hi = kInf;
};

struct LaplaceProblem {
  std::function<double(double)> f;
  std::function<double(double)> f1;
  std::function<double(double)> f2;
  /// (lo, hi) -> sup |F'''| on [lo, hi].
  std::function<double(double, double)> f3_sup;
  Interval domain;
  std::optional<double> bracket_hint;
};

enum class Side { two_sided, left_bounded, right_bounded };

inline const char* to_string(Side side) {
  switch (side) {
    case Side::two_sided: return "two_sided";
    case Side::left_bounded: return "left_bounded";
    default: return "right_bounded";
  }
}

struct LaplaceResult {
  double x_star = 0.0;
  double f_at_max = 0.0;
  double sigma = 0.0;
  double log_value = 0.0;
  double r = 0.0;
  double eta = 0.0;
  double delta = 0.0;
  double ratio_r_sigma = 0.0;
  Side side = Side::two_sided;
  /// The default window did not fit in the domain and was shrunk; the
  /// two-sided value is still reported but r/sigma is smaller than intended.
  bool window_clipped = false;
};

/// A boundary counts as "at" the maximum when it is within this many sigma.
inline constexpr double kBoundaryFraction = 0.01;

struct Peak {
  double x = 0.0;
  double sigma = 0.0;
  Side side = Side::two_sided;
};

namespace detail {

inline double sigma_at(const LaplaceProblem& problem, double x) {
  const double f2 = problem.f2(x);
  if (!(f2 < 0.0)) throw numerical_error("not strictly concave at maximum");
  return 1.0 / std::sqrt(-f2);
}

// Maximum sitting on a finite end where F' points out of the domain. The
// stationary point lies roughly |F'| sigma^2 beyond the end; the
// one-sided treatment applies only when that is within a small fraction of
// sigma.
inline Peak boundary_peak(const LaplaceProblem& problem, double end, Side side) {
  const double slope = problem.f1(end);
  const double sigma = sigma_at(problem, end);
  if (std::abs(slope) * sigma > kBoundaryFraction) {
    throw numerical_error("no interior maximum: the objective peaks at a domain boundary");
  }
  return {end, sigma, side};
}

}  // namespace detail

/// Locates the maximizer by bracketing and bisection on F'.
inline Peak locate_maximum(const LaplaceProblem& problem) {
  const Interval dom = problem.domain;
  if (!(dom.lo < dom.hi)) throw domain_error("empty integration domain");
  double start;
  if (problem.bracket_hint) {
    start = *problem.bracket_hint;
  } else if (std::isfinite(dom.lo) && std::isfinite(dom.hi)) {
    start = 0.5 * (dom.lo + dom.hi);
  } else if (std::isfinite(dom.lo)) {
    start = dom.lo + 1.0;
  } else if (std::isfinite(dom.hi)) {
    start = dom.hi - 1.0;
  } else {
    start = 0.0;
  }
  start = std::clamp(start, dom.lo, dom.hi);

  double d = problem.f1(start);
  if (std::isnan(d)) throw numerical_error("F' is not a number at the starting point");
  double lo, hi;  // F'(lo) > 0 >= F'(hi)
  if (d == 0.0) {
    lo = hi = start;
  } else {
    const bool rightward = d > 0.0;
    double step = std::max(1.0, std::abs(start));
    double prev = start;
    for (int it = 0;; ++it) {
      if (it > 2000) throw numerical_error("no interior maximum: bracket expansion failed");
      double next = rightward ? std::min(prev + step, dom.hi) : std::max(prev - step, dom.lo);
      const double dn = problem.f1(next);
      if (std::isnan(dn)) throw numerical_error("F' is not a number while bracketing");
      const bool at_end = next == (rightward ? dom.hi : dom.lo);
      if (rightward ? dn <= 0.0 : dn > 0.0) {
        lo = rightward ? prev : next;
        hi = rightward ? next : prev;
        break;
      }
      if (at_end) {
        return detail::boundary_peak(problem, next,
                                     rightward ? Side::right_bounded : Side::left_bounded);
      }
      prev = next;
      step *= 2.0;
    }
    for (int it = 0; it < 2000; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      const double dm = problem.f1(mid);
      if (dm == 0.0) {
        lo = hi = mid;
        break;
      }
      (dm > 0.0 ? lo : hi) = mid;
    }
  }
  // hi is the last point with F' <= 0; prefer whichever end has smaller |F'|.
  const double x = std::abs(problem.f1(lo)) < std::abs(problem.f1(hi)) ? lo : hi;
  const double sigma = detail::sigma_at(problem, x);
  if (std::isfinite(dom.lo) && x - dom.lo <= kBoundaryFraction * sigma) {
    return {x, sigma, Side::left_bounded};
  }
  if (std::isfinite(dom.hi) && dom.hi - x <= kBoundaryFraction * sigma) {
    return {x, sigma, Side::right_bounded};
  }
  return {x, sigma, Side::two_sided};
}

/// Laplace approximation with window r = max(|x*|, 1)^beta.
inline LaplaceResult approx(const LaplaceProblem& problem,
                            double beta = objective::kDefaultBeta) {
  if (!(beta > 0.5 && beta < 1.0)) throw domain_error("beta must lie in (1/2, 1)");
  const Peak peak = locate_maximum(problem);
  const Interval dom = problem.domain;

  LaplaceResult out;
  out.x_star = peak.x;
  out.sigma = peak.sigma;
  out.side = peak.side;
  out.f_at_max = problem.f(peak.x);
  out.r = std::pow(std::max(std::abs(peak.x), 1.0), beta);

  double lo, hi;
  switch (peak.side) {
    case Side::left_bounded:
      lo = peak.x;
      hi = std::min(peak.x + out.r, dom.hi);
      break;
    case Side::right_bounded:
      lo = std::max(peak.x - out.r, dom.lo);
      hi = peak.x;
      break;
    default: {
      const double room = std::min(peak.x - dom.lo, dom.hi - peak.x);
      if (room < out.r) {
        out.r = room;
        out.window_clipped = true;
      }
      lo = peak.x - out.r;
      hi = peak.x + out.r;
    }
  }
  if (!(problem.f2(lo) <= 0.0) || !(problem.f2(hi) <= 0.0)) {
    throw numerical_error("F is not concave on the Laplace window");
  }
  out.eta = problem.f3_sup(lo, hi);
  out.delta = out.sigma * out.sigma * out.r * out.eta;
  out.ratio_r_sigma = out.r / out.sigma;
  const double var = out.sigma * out.sigma;
  out.log_value = out.f_at_max + (peak.side == Side::two_sided
                                       ? 0.5 * std::log(2.0 * std::numbers::pi * var)
                                       : 0.5 * std::log(0.5 * std::numbers::pi * var));
  return out;
}

/// log int_I exp(F), by Gauss-Kronrod panels of width sigma marching out from
/// x*. Each side stops once the tangent-line majorant of the remaining tail,
/// exp(F(x_end)) / |F'(x_end)| (valid because F is concave), is below the
/// tolerance share.
inline double integrate_direct(const LaplaceProblem& problem, double rel_tol = 1e-12) {
  if (!(rel_tol > 0.0)) throw domain_error("rel_tol must be > 0");
  const Peak peak = locate_maximum(problem);
  const double f_max = problem.f(peak.x);
  const Interval dom = problem.domain;
  const double sigma = peak.sigma;
  constexpr double kMaxSigmas = 1e4;

  auto scaled = [&](double x) {
    const double v = problem.f(x) - f_max;
    return std::isfinite(v) ? std::exp(v) : 0.0;
  };
  using Quad = boost::math::quadrature::gauss_kronrod<double, 15>;

  double total = 0.0;
  auto march = [&](int direction) {
    const double end = direction > 0 ? dom.hi : dom.lo;
    double a = peak.x;
    for (;;) {
      double b = a + direction * sigma;
      b = direction > 0 ? std::min(b, end) : std::max(b, end);
      if (a == b) return;
      const double lo = std::min(a, b), hi = std::max(a, b);
      total += Quad::integrate(scaled, lo, hi, 15, 0.1 * rel_tol);
      if (b == end) return;
      const double slope = problem.f1(b);
      if (direction * slope < 0.0) {
        const double tail = scaled(b) / std::abs(slope);
        if (tail <= 0.25 * rel_tol * total) return;
      }
      if (std::abs(b - peak.x) > kMaxSigmas * sigma) {
        throw numerical_error("quadrature did not converge within 1e4 sigma of the maximum");
      }
      a = b;
    }
  };
  march(+1);
  march(-1);
  return f_max + std::log(total);
}

// ---------------------------------------------------------------------------
// The waiting-time family f_n, g_n.

inline LaplaceProblem objective_problem(const objective::ObjectiveParams& params) {
  LaplaceProblem problem;
  problem.f = [params](double x) { return objective::f(params, x); };
  problem.f1 = [params](double x) { return objective::f_prime(params, x); };
  problem.f2 = [params](double x) { return objective::f_second(params, x); };
  problem.f3_sup = [params](double lo, double hi) {
    return objective::f_third_sup(params, lo, hi);
  };
  problem.domain = {0.0, kInf};
  problem.bracket_hint = std::max(objective::initial_guess(params), 1.0);
  return problem;
}

struct ObjectiveLaplace {
  LaplaceResult laplace;
  double log_g = 0.0;
  /// log(g_n * int_0^inf exp(f_n)) as approximated by the Laplace value.
  double log_total = 0.0;
};

inline ObjectiveLaplace approx_objective(double p, double q, std::int64_t n,
                                         double beta = objective::kDefaultBeta) {
  const objective::ObjectiveParams params(p, q, n);
  if (objective::maximize(params).boundary_max) {
    throw domain_error(
        "f_n peaks at x = 0 for these parameters; evaluate the exact series instead");
  }
  ObjectiveLaplace out;
  out.laplace = approx(objective_problem(params), beta);
  out.log_g = objective::log_g(params);
  out.log_total = out.log_g + out.laplace.log_value;
  return out;
}

struct SumIntegralGap {
  double log_sum = 0.0;       // log sum_{k>=0} exp(f_n(k))
  double log_integral = 0.0;  // log int_0^inf exp(f_n)
  double log_gap = 0.0;       // log |sum - integral|
  double log_bound = 0.0;     // log 2 exp(f_n(x_n))
  bool holds = false;
};

/// Compares the lattice sum of exp(f_n) with its integral against the bound
/// |sum - integral| <= exp(f_n(0)) + exp(f_n(floor x_n)) <= 2 exp(f_n(x_n)).
inline SumIntegralGap sum_integral_gap(double p, double q, std::int64_t n) {
  const objective::ObjectiveParams params(p, q, n);
  const auto peak = objective::maximize(params);
  if (peak.boundary_max) throw domain_error("sum/integral comparison needs an interior maximum");
  SumIntegralGap out;
  out.log_sum = series::smooth_log_prob(p, q, n).log_prob - objective::log_g(params);
  out.log_integral = integrate_direct(objective_problem(params), 1e-13);
  out.log_gap = log_abs_diff(out.log_sum, out.log_integral);
  out.log_bound = std::log(2.0) + peak.f_at_max;
  out.holds = out.log_gap <= out.log_bound;
  return out;
}

}  // namespace ldwait::laplace
