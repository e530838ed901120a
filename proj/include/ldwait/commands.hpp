#pragma once

// Builders for the command-line tables. Each returns an OutputRecord so the
// tables can be produced and inspected without going through a process.

#include <cmath>
#include <cstdint>
#include <vector>

#include "ldwait/error.hpp"
#include "ldwait/exactseries.hpp"
#include "ldwait/laplace.hpp"
#include "ldwait/process.hpp"
#include "ldwait/rate.hpp"
#include "ldwait/report.hpp"

namespace ldwait::commands {

inline constexpr double kMaxQ = 1e4;

/// q_min, q_min + step, ..., up to q_max inclusive (1e-9 relative slack so
/// that decimal endpoints such as 8.0 = 0.1 + 79 * 0.1 are kept).
inline std::vector<double> q_grid(double q_min, double q_max, double step) {
  if (!(step > 0.0) || !(q_min > 0.0) || !(q_max >= q_min) || !(q_max <= kMaxQ)) {
    throw domain_error("q range must satisfy 0 < q_min <= q_max <= 1e4 with step > 0");
  }
  const auto count = static_cast<std::int64_t>(std::floor((q_max - q_min) / step + 1e-9)) + 1;
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(count));
  for (std::int64_t i = 0; i < count; ++i) out.push_back(q_min + static_cast<double>(i) * step);
  return out;
}

inline void append_rate_rows(report::OutputRecord& rec, double p, const std::vector<double>& qs) {
  for (double q : qs) {
    const auto ev = rate::evaluate({p, q});
    rec.add_row({p, q, ev.big_c.value(), ev.rate, ev.rate_prime.value(), ev.rate_second.value(),
                 ev.asymptote});
  }
}

inline report::OutputRecord rate_curve(double p, const std::vector<double>& qs) {
  report::OutputRecord rec(report::Schema::rate_curve);
  append_rate_rows(rec, p, qs);
  return rec;
}

/// Rate curves for several p on q = step, 2 step, ..., q_max.
inline report::OutputRecord plot_data(const std::vector<double>& ps, double q_max, double step) {
  report::OutputRecord rec(report::Schema::rate_curve);
  const auto qs = q_grid(step, q_max, step);
  for (double p : ps) append_rate_rows(rec, p, qs);
  return rec;
}

inline void append_convergence_row(report::OutputRecord& rec, std::int64_t n, double log_prob,
                                   double rate_value) {
  const double a_n = -log_prob / static_cast<double>(n);
  rec.add_row({static_cast<double>(n), log_prob, a_n, rate_value, a_n - rate_value});
}

inline report::OutputRecord exact(double p, double q, std::int64_t n, double rel_tol) {
  report::OutputRecord rec(report::Schema::convergence);
  const auto res = series::exact_log_prob(p, q, n, rel_tol);
  append_convergence_row(rec, n, res.log_prob, rate::rate_i({p, q}));
  return rec;
}

inline report::OutputRecord converge(double p, double q, std::int64_t n_max, double rel_tol) {
  report::OutputRecord rec(report::Schema::convergence);
  const double i = rate::rate_i({p, q});
  for (const auto& row : series::convergence_table(p, q, n_max, rel_tol)) {
    append_convergence_row(rec, row.n, row.log_prob, i);
  }
  return rec;
}

inline report::OutputRecord monte_carlo(const process::ProcessParams& params, double q,
                                        std::int64_t n, std::uint64_t samples,
                                        std::uint64_t seed, std::uint64_t streams,
                                        unsigned threads = 0) {
  report::OutputRecord rec(report::Schema::mc_vs_exact);
  const auto est = process::estimate(params, q, n, samples, seed, streams, threads);
  const double exact_prob = std::exp(series::exact_log_prob(params.p(), q, n).log_prob);
  rec.add_row({params.p(), q, static_cast<double>(n), static_cast<double>(est.samples),
               static_cast<double>(est.hits), est.estimate, est.ci_low, est.ci_high, exact_prob,
               static_cast<double>(est.seed), static_cast<double>(est.streams)});
  return rec;
}

inline report::OutputRecord laplace_check(double p, double q, std::int64_t n, double beta) {
  report::OutputRecord rec(report::Schema::laplace_check);
  const auto lap = laplace::approx_objective(p, q, n, beta);
  const double log_series = series::smooth_log_prob(p, q, n).log_prob;
  rec.add_row({lap.laplace.x_star, lap.laplace.sigma, lap.laplace.delta, lap.log_total,
               log_series, std::exp(lap.log_total - log_series)});
  return rec;
}

}  // namespace ldwait::commands
