#pragma once

// Simulation of the waiting times z_i between successive occurrences of a
// marked symbol in a Bernoulli sequence, and Monte Carlo estimation of
// P(z_{n+1} / Z_n > q).

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <numeric>
#include <string>
#include <thread>
#include <tuple>
#include <utility>
#include <vector>

#include "ldwait/error.hpp"
#include "ldwait/event.hpp"
#include "ldwait/rng.hpp"

namespace ldwait::process {

enum class Mode { geometric, alphabet };

class ProcessParams {
 public:
  /// Waits drawn directly as geometric variates.
  static ProcessParams geometric(double p) {
    if (!(p > 0.0 && p < 1.0)) throw domain_error("p must lie in (0, 1)");
    ProcessParams out;
    out.p_ = p;
    return out;
  }

  /// Full alphabet with probabilities `probs`; `marked` is the index of the
  /// symbol whose occurrences are timed.
  static ProcessParams alphabet(std::vector<double> probs, std::size_t marked) {
    if (probs.size() < 2) throw domain_error("alphabet needs at least two symbols");
    if (marked >= probs.size()) throw domain_error("marked index out of range");
    double total = 0.0;
    for (double v : probs) {
      if (!(v > 0.0)) throw domain_error("alphabet probabilities must be positive");
      total += v;
    }
    if (std::abs(total - 1.0) > 1e-12) throw domain_error("alphabet probabilities must sum to 1");
    ProcessParams out;
    out.mode_ = Mode::alphabet;
    out.p_ = probs[marked];
    out.marked_ = marked;
    out.cumulative_.resize(probs.size());
    std::partial_sum(probs.begin(), probs.end(), out.cumulative_.begin());
    out.cumulative_.back() = 1.0;
    out.probs_ = std::move(probs);
    return out;
  }

  Mode mode() const { return mode_; }
  double p() const { return p_; }
  const std::vector<double>& alphabet_probs() const { return probs_; }
  std::size_t marked() const { return marked_; }

  /// One waiting time, >= 1.
  std::uint64_t draw_wait(Xoshiro256& gen) const {
    if (mode_ == Mode::geometric) {
      const double z = std::ceil(std::log(gen.uniform_open()) / std::log1p(-p_));
      return z < 1.0 ? 1 : static_cast<std::uint64_t>(z);
    }
    std::uint64_t count = 0;
    for (;;) {
      ++count;
      const double u = gen.uniform_open();
      const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
      const auto symbol = static_cast<std::size_t>(it - cumulative_.begin());
      if (symbol == marked_) return count;
    }
  }

 private:
  Mode mode_ = Mode::geometric;
  double p_ = 0.5;
  std::size_t marked_ = 0;
  std::vector<double> probs_;
  std::vector<double> cumulative_;
};

struct Trajectory {
  std::vector<std::uint64_t> waits;   // z_1 .. z_{n+1}
  std::vector<std::uint64_t> totals;  // Z_1 .. Z_{n+1}
};

struct MCEstimate {
  std::uint64_t samples = 0;
  std::uint64_t hits = 0;
  double estimate = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t streams = 1;
};

inline constexpr double kZ95 = 1.959963984540054;

/// 95% Wilson score interval for hits/samples.
inline std::pair<double, double> wilson_interval(std::uint64_t hits, std::uint64_t samples,
                                                 double z = kZ95) {
  const double n = static_cast<double>(samples);
  const double phat = static_cast<double>(hits) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (phat + z2 / (2.0 * n)) / denom;
  const double half = z / denom * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n));
  const double lo = std::clamp(std::min(center - half, phat), 0.0, 1.0);
  const double hi = std::clamp(std::max(center + half, phat), 0.0, 1.0);
  return {lo, hi};
}

/// Waits z_1..z_{n+1} and totals Z_1..Z_{n+1} from stream 0 of `seed`.
inline Trajectory simulate(const ProcessParams& params, std::int64_t n, std::uint64_t seed) {
  if (n < 1) throw domain_error("n must be >= 1");
  Xoshiro256 gen(seed);
  Trajectory out;
  out.waits.reserve(static_cast<std::size_t>(n) + 1);
  out.totals.reserve(static_cast<std::size_t>(n) + 1);
  std::uint64_t total = 0;
  for (std::int64_t i = 0; i <= n; ++i) {
    const std::uint64_t z = params.draw_wait(gen);
    total += z;
    out.waits.push_back(z);
    out.totals.push_back(total);
  }
  return out;
}

/// Worker count: LDWAIT_THREADS when set and positive, else hardware
/// parallelism.
inline unsigned default_threads() {
  if (const char* env = std::getenv("LDWAIT_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace detail {

inline std::uint64_t count_hits(const ProcessParams& params, double q, std::int64_t n,
                                std::uint64_t samples, Xoshiro256 gen) {
  std::uint64_t hits = 0;
  for (std::uint64_t s = 0; s < samples; ++s) {
    std::uint64_t total = 0;
    for (std::int64_t i = 0; i < n; ++i) total += params.draw_wait(gen);
    if (exceeds_ratio(params.draw_wait(gen), total, q)) ++hits;
  }
  return hits;
}

}  // namespace detail

/// Monte Carlo estimate of P(z_{n+1}/Z_n > q).
///
/// Samples are split into `streams` contiguous blocks; block s uses substream
/// s of `seed`. The result depends only on (seed, streams, samples), never on
/// `threads` (0 selects default_threads()).
inline MCEstimate estimate(const ProcessParams& params, double q, std::int64_t n,
                           std::uint64_t samples, std::uint64_t seed, std::uint64_t streams = 1,
                           unsigned threads = 0) {
  if (!(q > 0.0) || !std::isfinite(q)) throw domain_error("q must be finite and > 0");
  if (n < 1) throw domain_error("n must be >= 1");
  if (samples < 1) throw domain_error("samples must be >= 1");
  if (streams < 1) throw domain_error("streams must be >= 1");
  if (threads == 0) threads = default_threads();
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, streams));

  std::vector<std::uint64_t> hits(streams, 0);
  std::atomic<std::uint64_t> next{0};
  auto worker = [&] {
    for (std::uint64_t s = next++; s < streams; s = next++) {
      const std::uint64_t share = samples / streams + (s < samples % streams ? 1 : 0);
      hits[s] = detail::count_hits(params, q, n, share, Xoshiro256::stream(seed, s));
    }
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  MCEstimate out;
  out.samples = samples;
  out.hits = std::accumulate(hits.begin(), hits.end(), std::uint64_t{0});
  out.estimate = static_cast<double>(out.hits) / static_cast<double>(samples);
  std::tie(out.ci_low, out.ci_high) = wilson_interval(out.hits, samples);
  out.seed = seed;
  out.streams = streams;
  return out;
}

}  // namespace ldwait::process
