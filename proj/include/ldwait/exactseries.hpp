#pragma once

// Certified log-space evaluation of
//
//   P(z_{n+1}/Z_n > q) = sum_{k>=n} C(k-1, n-1) p^n (1-p)^{k-n} (1-p)^{floor(kq)}
//
// and of its floor-free companion sum_{k>=0} g_n exp(f_n(k)), which sits
// between (1-p) P and P and equals P when q is an integer.
//
// Truncation: with k' = k - n the floor-free term ratio is
// rho_{k'} = ((k'+n)/(k'+1)) (1-p)^{1+q}, decreasing in k'. Once rho < 1 the
// remaining terms are dominated by a geometric series, t rho / (1 - rho), and
// the floor can enlarge a term by at most 1/(1-p).

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "ldwait/error.hpp"
#include "ldwait/event.hpp"
#include "ldwait/log_sum.hpp"
#include "ldwait/objective.hpp"
#include "ldwait/rate.hpp"

namespace ldwait::series {

inline constexpr double kMinRelTol = 1e-14;
inline constexpr double kDefaultRelTol = 1e-14;
inline constexpr std::int64_t kMaxTerms = 200'000'000;
inline constexpr std::int64_t kMaxTableN = 2000;

struct SeriesResult {
  double log_prob = 0.0;
  std::int64_t terms_used = 0;
  double log_tail_bound = -std::numeric_limits<double>::infinity();
  bool converged = false;
};

struct ConvergenceRow {
  std::int64_t n;
  double log_prob;
  double a_n;
};

namespace detail {

inline void check_common(double p, double q, std::int64_t n, double rel_tol) {
  if (!(p > 0.0 && p < 1.0)) throw domain_error("p must lie in (0, 1)");
  if (!(q > 0.0) || !std::isfinite(q)) {
    throw domain_error("q must be finite and > 0 (for q <= 0 the event is certain)");
  }
  if (n < 1) throw domain_error("n must be >= 1");
  if (!(rel_tol >= kMinRelTol)) throw domain_error("rel_tol must be >= 1e-14");
}

// log rho for the floor-free ratio at offset k' = k - n.
inline double log_ratio(std::int64_t offset, std::int64_t n, double log_complement, double q) {
  return std::log1p(static_cast<double>(n - 1) / static_cast<double>(offset + 1)) +
         (1.0 + q) * log_complement;
}

// log of rho / (1 - rho) for rho < 1.
inline double log_geometric_tail(double log_rho) {
  return log_rho - std::log(-std::expm1(log_rho));
}

// `term` yields the log of the k'-th term; `extra_log_factor` is added to the
// tail majorant (the floor allowance for the exact series). A positive
// `fixed_terms` sums exactly that many terms and skips the stopping rule.
template <class Term>
SeriesResult sum_series(double p, double q, std::int64_t n, double rel_tol,
                        double extra_log_factor, std::int64_t fixed_terms, Term&& term) {
  const double log_complement = std::log1p(-p);
  const double log_rel_tol = std::log(rel_tol);
  LogSumExp acc;
  SeriesResult out;
  for (std::int64_t offset = 0;; ++offset) {
    const double log_t = term(offset);
    acc.add(log_t);
    ++out.terms_used;
    const double log_rho = log_ratio(offset, n, log_complement, q);
    if (log_rho < 0.0) {
      out.log_tail_bound = log_t + log_geometric_tail(log_rho) + extra_log_factor;
      if (fixed_terms > 0) {
        if (out.terms_used >= fixed_terms) break;
      } else if (out.log_tail_bound <= log_rel_tol + acc.value()) {
        out.converged = true;
        break;
      }
    } else if (fixed_terms > 0 && out.terms_used >= fixed_terms) {
      out.log_tail_bound = std::numeric_limits<double>::infinity();
      break;
    }
    if (out.terms_used >= kMaxTerms) {
      throw numerical_error("series did not reach its tail bound within the term limit");
    }
  }
  out.log_prob = std::min(acc.value(), 0.0);
  if (fixed_terms > 0) {
    out.converged = out.log_tail_bound <= log_rel_tol + out.log_prob;
  }
  return out;
}

inline SeriesResult exact_impl(double p, double q, std::int64_t n, double rel_tol,
                               std::int64_t fixed_terms) {
  const double log_p_part = static_cast<double>(n) * std::log(p);
  const double log_complement = std::log1p(-p);
  // ln C(k-1, n-1), advanced by ln(k / (k-n+1)) with compensated summation.
  CompensatedSum log_binom;
  std::int64_t last_offset = 0;
  auto term = [&](std::int64_t offset) {
    if (offset > last_offset) {
      const std::int64_t k = n + offset - 1;  // advance C(k-1,n-1) -> C(k,n-1)
      log_binom.add(std::log1p(static_cast<double>(n - 1) / static_cast<double>(k - n + 1)));
      last_offset = offset;
    }
    const double k = static_cast<double>(n + offset);
    const double exponent = static_cast<double>(offset) + threshold_floor(k, q);
    return log_binom.value() + log_p_part + exponent * log_complement;
  };
  return sum_series(p, q, n, rel_tol, -log_complement, fixed_terms, term);
}

inline SeriesResult smooth_impl(double p, double q, std::int64_t n, double rel_tol,
                                std::int64_t fixed_terms) {
  const objective::ObjectiveParams params(p, q, n);
  const double lg = objective::log_g(params);
  auto term = [&](std::int64_t offset) {
    return lg + objective::f(params, static_cast<double>(offset));
  };
  return sum_series(p, q, n, rel_tol, 0.0, fixed_terms, term);
}

}  // namespace detail

/// log P(z_{n+1}/Z_n > q) with relative truncation error <= rel_tol.
inline SeriesResult exact_log_prob(double p, double q, std::int64_t n,
                                   double rel_tol = kDefaultRelTol) {
  detail::check_common(p, q, n, rel_tol);
  return detail::exact_impl(p, q, n, rel_tol, 0);
}

/// Same series truncated after exactly `terms` terms; the tail bound is still
/// reported. Used to audit the stopping rule.
inline SeriesResult exact_log_prob_terms(double p, double q, std::int64_t n,
                                         std::int64_t terms, double rel_tol = kDefaultRelTol) {
  detail::check_common(p, q, n, rel_tol);
  if (terms < 1) throw domain_error("terms must be >= 1");
  return detail::exact_impl(p, q, n, rel_tol, terms);
}

/// log of sum_{k>=0} g_n exp(f_n(k)), the floor-free comparable series.
inline SeriesResult smooth_log_prob(double p, double q, std::int64_t n,
                                    double rel_tol = kDefaultRelTol) {
  detail::check_common(p, q, n, rel_tol);
  if (n < 2) throw domain_error("the floor-free series needs n >= 2");
  return detail::smooth_impl(p, q, n, rel_tol, 0);
}

/// (n, log P_n, -log P_n / n) for n = 1..n_max; a_n tends to I_p(q).
inline std::vector<ConvergenceRow> convergence_table(double p, double q, std::int64_t n_max,
                                                     double rel_tol = kDefaultRelTol) {
  detail::check_common(p, q, 1, rel_tol);
  if (n_max < 1 || n_max > kMaxTableN) throw domain_error("n_max must lie in [1, 2000]");
  std::vector<ConvergenceRow> rows;
  rows.reserve(static_cast<std::size_t>(n_max));
  for (std::int64_t n = 1; n <= n_max; ++n) {
    const double lp = exact_log_prob(p, q, n, rel_tol).log_prob;
    rows.push_back({n, lp, -lp / static_cast<double>(n)});
  }
  return rows;
}

}  // namespace ldwait::series
