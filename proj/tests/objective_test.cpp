#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "ldwait/objective.hpp"
#include "ldwait/rate.hpp"
#include "oracles.hpp"

using ldwait::objective::ObjectiveParams;
namespace ob = ldwait::objective;

namespace {

// -ln B(k+1, n-1) = ln of (k+n-1)! / ((n-2)! k!), by explicit products of
// integers.
double log_binomial_factorials(int k, int n) {
  long double num = 1.0L, den = 1.0L;
  for (int i = 1; i <= k + n - 1; ++i) num *= i;
  for (int i = 1; i <= n - 2; ++i) den *= i;
  for (int i = 1; i <= k; ++i) den *= i;
  return static_cast<double>(std::log(num / den));
}

double big_c(const ObjectiveParams& pr) { return ldwait::rate::big_c({pr.p(), pr.q()}); }

}  // namespace

TEST(ObjectiveParams, Validation) {
  EXPECT_THROW(ObjectiveParams(0.5, 1.0, 1), ldwait::domain_error);
  EXPECT_THROW(ObjectiveParams(0.0, 1.0, 5), ldwait::domain_error);
  EXPECT_THROW(ObjectiveParams(0.5, 0.0, 5), ldwait::domain_error);
  const ObjectiveParams pr(0.3, 0.5, 10);
  EXPECT_NEAR(pr.c0(), -1.5 * std::log(0.7), 1e-15);
  EXPECT_GT(pr.c0(), 0.0);
}

TEST(F, AtZeroIsLogOfGap) {
  for (int n : {2, 3, 10, 1000}) {
    EXPECT_NEAR(ob::f(ObjectiveParams(0.4, 0.7, n), 0.0), std::log(n - 1.0), 1e-14);
  }
}

TEST(F, HandValue) {
  EXPECT_NEAR(ob::f(ObjectiveParams(0.5, 1.0, 3), 1.0), std::log(6.0) - std::log(4.0), 1e-14);
}

TEST(F, FactorialOracle) {
  for (double p : {0.2, 0.5}) {
    for (double q : {0.5, 2.0}) {
      for (int n : {2, 5, 40}) {
        const ObjectiveParams pr(p, q, n);
        for (int k = 0; k + n <= 170; k += 7) {
          const double want = log_binomial_factorials(k, n) - k * pr.c0();
          EXPECT_NEAR(ob::f(pr, k), want, 1e-10) << p << " " << q << " " << n << " " << k;
        }
      }
    }
  }
}

TEST(F, NegativeXRejected) {
  const ObjectiveParams pr(0.5, 1.0, 4);
  EXPECT_THROW(ob::f(pr, -0.1), ldwait::domain_error);
  EXPECT_THROW(ob::f_prime(pr, -1.0), ldwait::domain_error);
  EXPECT_THROW(ob::f_second(pr, -1.0), ldwait::domain_error);
}

TEST(FPrime, SingleTermAtNTwo) {
  const ObjectiveParams pr(0.37, 1.3, 2);
  for (double x : {0.0, 0.2, 1.0, 7.5, 300.0}) {
    const double want = 1.0 / (x + 1.0) - pr.c0();
    EXPECT_NEAR(ob::f_prime(pr, x), want, 1e-12 * (1.0 + std::abs(want))) << x;
  }
}

TEST(FPrime, MatchesHarmonicSums) {
  for (int n : {2, 3, 17, 250, 10000}) {
    const ObjectiveParams pr(0.3, 0.5, n);
    for (double x : {0.0, 0.5, 3.0, 40.0, 1e4}) {
      const double s1 = oracle::harmonic_sum(x, n, 1);
      // compare the sum part separately so the c0 offset cannot hide errors
      EXPECT_LE(std::abs(ob::f_prime(pr, x) + pr.c0() - s1), 1e-12 * s1) << n << " " << x;
      const double s2 = oracle::harmonic_sum(x, n, 2);
      EXPECT_LE(std::abs(ob::f_second(pr, x) + s2), 1e-12 * s2) << n << " " << x;
      const double s3 = 2.0 * oracle::harmonic_sum(x, n, 3);
      EXPECT_LE(std::abs(ob::f_third_sup(pr, x, x + 1.0) - s3), 1e-12 * s3) << n << " " << x;
    }
  }
}

TEST(FPrime, DecreasingAndLimit) {
  const ObjectiveParams pr(0.3, 1.0, 50);
  double prev = ob::f_prime(pr, 0.0);
  for (double x = 0.25; x < 1e6; x *= 1.5) {
    const double v = ob::f_prime(pr, x);
    EXPECT_LT(v, prev);
    prev = v;
  }
  EXPECT_LE(ob::f_prime(pr, 1e8) + pr.c0(), 1e-6);
}

TEST(FSecond, OneTermValueAndSign) {
  EXPECT_NEAR(ob::f_second(ObjectiveParams(0.5, 1.0, 2), 0.0), -1.0, 1e-15);
  for (double p : {0.1, 0.6}) {
    for (int n : {2, 9, 1000}) {
      const ObjectiveParams pr(p, 1.5, n);
      for (double x = 0.0; x < 1e7; x = 3.0 * x + 0.1) EXPECT_LT(ob::f_second(pr, x), 0.0);
    }
  }
}

TEST(FThirdSup, OneTermAndValidation) {
  const ObjectiveParams pr(0.5, 1.0, 2);
  EXPECT_NEAR(ob::f_third_sup(pr, 0.0, 1.0), 2.0, 1e-15);
  EXPECT_THROW(ob::f_third_sup(pr, 1.0, 1.0), ldwait::domain_error);
  EXPECT_THROW(ob::f_third_sup(pr, -1.0, 1.0), ldwait::domain_error);
}

TEST(Derivatives, MatchFiniteDifferences) {
  for (double p : {0.1, 0.3, 0.5}) {
    for (int n : {5, 100, 3000}) {
      const ObjectiveParams pr(p, 0.8, n);
      for (double x : {0.5, 4.0, 0.5 * n, 2.0 * n}) {
        const double h = 1e-5 * std::max(1.0, x);
        const double fd1 = (ob::f(pr, x + h) - ob::f(pr, x - h)) / (2 * h);
        const double d1 = ob::f_prime(pr, x);
        // f' vanishes near the maximizer, so measure against the scale of its terms
        EXPECT_LE(std::abs(fd1 - d1), 1e-6 * (std::abs(d1) + pr.c0())) << p << " " << n << " " << x;
        const double fd2 = (ob::f_prime(pr, x + h) - ob::f_prime(pr, x - h)) / (2 * h);
        const double d2 = ob::f_second(pr, x);
        EXPECT_LE(std::abs(fd2 - d2), 1e-5 * std::abs(d2)) << p << " " << n << " " << x;
      }
    }
  }
}

TEST(LogG, Values) {
  EXPECT_NEAR(ob::log_g(ObjectiveParams(0.5, 1.0, 2)), -4.0 * std::log(2.0), 1e-14);
  using oracle::mp;
  const mp want = 10 * log(mp("0.3")) + 5 * log(1 - mp("0.3")) - log(mp(9));
  const double w = static_cast<double>(want);
  EXPECT_LE(std::abs(ob::log_g(ObjectiveParams(0.3, 0.5, 10)) - w), 1e-13 * std::abs(w));
}

TEST(Maximize, BoundaryForSmallN) {
  const ObjectiveParams pr(0.5, 1.0, 2);
  EXPECT_NEAR(ob::f_prime(pr, 0.0), 1.0 - 2.0 * std::log(2.0), 1e-15);
  const auto m = ob::maximize(pr);
  EXPECT_TRUE(m.boundary_max);
  EXPECT_EQ(m.x_star, 0.0);
}

TEST(Maximize, RootAndLocalMaximum) {
  for (double p : {0.1, 0.3, 0.5}) {
    for (double q : {0.5, 1.0, 2.0}) {
      for (int n : {20, 100, 1000, 10000}) {
        const ObjectiveParams pr(p, q, n);
        const auto m = ob::maximize(pr);
        ASSERT_FALSE(m.boundary_max);
        EXPECT_LE(std::abs(ob::f_prime(pr, m.x_star)), 1e-10 * (1.0 + pr.c0()));
        EXPECT_NEAR(m.sigma, 1.0 / std::sqrt(-m.f2_at_max), 1e-12 * m.sigma);
        for (double d : {1e-3, 1.0, 10.0}) {
          // The drop is about d^2 / (2 sigma^2); below a few ulps of f it is
          // not representable and only <= can be asked for.
          const double drop = d * d / (2.0 * m.sigma * m.sigma);
          const bool resolvable = drop > 8.0 * std::abs(m.f_at_max) * 2.2e-16;
          for (double x : {m.x_star - d, m.x_star + d}) {
            if (x < 0.0) continue;
            if (resolvable) {
              EXPECT_LT(ob::f(pr, x), m.f_at_max) << p << " " << q << " " << n << " " << d;
            } else {
              EXPECT_LE(ob::f(pr, x), m.f_at_max) << p << " " << q << " " << n << " " << d;
            }
          }
        }
      }
    }
  }
}

TEST(Maximize, LinearGrowthOfMaximizer) {
  const ObjectiveParams pr(0.5, 1.0, 1000);
  const auto m = ob::maximize(pr);
  const double ratio = m.x_star / (big_c(pr) * 1000.0);
  EXPECT_GE(ratio, 0.95);
  EXPECT_LE(ratio, 1.05);
}

TEST(Maximize, SigmaScaling) {
  const ObjectiveParams pr(0.3, 1.0, 10000);
  const double c = big_c(pr);
  const double ratio = ob::maximize(pr).sigma / std::sqrt(1e4 * (c * c + c));
  EXPECT_GE(ratio, 0.95);
  EXPECT_LE(ratio, 1.05);
}

TEST(Maximize, RatiosApproachOne) {
  for (double p : {0.3, 0.5}) {
    for (double q : {0.5, 1.0, 2.0}) {
      double prev_x = INFINITY, prev_s = INFINITY;
      for (int n : {100, 1000, 10000}) {
        const ObjectiveParams pr(p, q, n);
        const double c = big_c(pr);
        const auto m = ob::maximize(pr);
        const double ex = std::abs(m.x_star / (c * n) - 1.0);
        const double es = std::abs(m.sigma / std::sqrt(n * (c * c + c)) - 1.0);
        EXPECT_LT(ex, prev_x) << p << " " << q << " " << n;
        EXPECT_LT(es, prev_s) << p << " " << q << " " << n;
        prev_x = ex;
        prev_s = es;
      }
    }
  }
}

TEST(Maximize, DeltaDecreasesAndEtaScales) {
  for (double p : {0.3, 0.5}) {
    for (double q : {0.5, 1.0, 2.0}) {
      double prev_delta = INFINITY;
      double band = 0.0;
      for (int n : {100, 1000, 10000}) {
        const ObjectiveParams pr(p, q, n);
        const auto m = ob::maximize(pr);
        const double r = std::pow(m.x_star, ob::kDefaultBeta);
        const double lo = std::max(0.0, m.x_star - r);
        const double eta = ob::f_third_sup(pr, lo, m.x_star + r);
        const double delta = m.sigma * m.sigma * r * eta;
        EXPECT_LT(delta, prev_delta) << p << " " << q << " " << n;
        prev_delta = delta;
        const double scaled = eta * static_cast<double>(n) * n;
        if (n == 100) band = scaled;
        EXPECT_LE(scaled, 4.0 * band);
        EXPECT_GE(scaled, band / 4.0);
      }
    }
  }
}
