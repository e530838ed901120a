#pragma once

#include <cmath>
#include <limits>

namespace ldwait {

/// Streaming log-sum-exp with a running maximum: holds
/// log(sum_i exp(t_i)) without ever forming exp(t_i) directly.
class LogSumExp {
 public:
  void add(double log_term) {
    if (log_term == -std::numeric_limits<double>::infinity()) return;
    if (log_term > max_) {
      scaled_ = scaled_ * std::exp(max_ - log_term) + 1.0;
      max_ = log_term;
    } else {
      scaled_ += std::exp(log_term - max_);
    }
  }

  double value() const {
    if (scaled_ == 0.0) return -std::numeric_limits<double>::infinity();
    return max_ + std::log(scaled_);
  }

 private:
  double max_ = -std::numeric_limits<double>::infinity();
  double scaled_ = 0.0;
};

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// log(exp(a) + exp(b)).
inline double log_add(double a, double b) {
  if (a < b) std::swap(a, b);
  if (b == -std::numeric_limits<double>::infinity()) return a;
  return a + std::log1p(std::exp(b - a));
}

/// log|exp(a) - exp(b)|.
inline double log_abs_diff(double a, double b) {
  if (a < b) std::swap(a, b);
  if (a == b) return -std::numeric_limits<double>::infinity();
  return a + std::log(-std::expm1(b - a));
}

}  // namespace ldwait
