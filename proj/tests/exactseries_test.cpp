#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "ldwait/event.hpp"
#include "ldwait/exactseries.hpp"
#include "ldwait/rate.hpp"
#include "oracles.hpp"

namespace ls = ldwait::series;

TEST(ThresholdFloor, DecimalProducts) {
  EXPECT_EQ(ldwait::threshold_floor(10.0, 0.7), 7.0);   // 10 * 0.7 = 6.999...
  EXPECT_EQ(ldwait::threshold_floor(10.0, 2.7), 27.0);
  EXPECT_EQ(ldwait::threshold_floor(3.0, 0.5), 1.0);
  EXPECT_EQ(ldwait::threshold_floor(7.0, 1.0), 7.0);
  EXPECT_EQ(ldwait::threshold_floor(3.0, 0.1), 0.0);
}

TEST(ExceedsRatio, StrictInequality) {
  EXPECT_FALSE(ldwait::exceeds_ratio(4, 4, 1.0));
  EXPECT_TRUE(ldwait::exceeds_ratio(5, 4, 1.0));
  EXPECT_FALSE(ldwait::exceeds_ratio(7, 10, 0.7));
  EXPECT_TRUE(ldwait::exceeds_ratio(8, 10, 0.7));
}

TEST(ExactLogProb, GeometricClosedForms) {
  EXPECT_NEAR(ls::exact_log_prob(0.5, 1.0, 1).log_prob, std::log(1.0 / 3.0), 1e-14);
  EXPECT_NEAR(ls::exact_log_prob(0.5, 2.0, 1).log_prob, std::log(1.0 / 7.0), 1e-14);
}

TEST(ExactLogProb, NegativeBinomialIdentity) {
  for (int n = 1; n <= 20; ++n) {
    const auto r = ls::exact_log_prob(0.5, 1.0, n);
    const double want = -n * std::log(3.0);
    EXPECT_LE(std::abs(r.log_prob - want), 1e-10 * std::abs(want)) << n;
    EXPECT_TRUE(r.converged);
  }
}

TEST(ExactLogProb, IntegerQClosedForm) {
  for (double p : {0.05, 0.3, 0.5, 0.8}) {
    for (int q : {1, 2, 3}) {
      for (int n : {1, 2, 7, 60, 400}) {
        const double want = oracle::integer_q_log_prob(p, q, n);
        EXPECT_NEAR(ls::exact_log_prob(p, q, n).log_prob, want, 1e-12 * (1.0 + std::abs(want)))
            << p << " " << q << " " << n;
      }
    }
  }
}

TEST(ExactLogProb, MatchesExplicitBinomialSum) {
  for (double p : {0.1, 0.3, 0.5, 0.9}) {
    for (double q : {0.3, 0.5, 0.7, 2.7, 4.25}) {
      for (int n : {1, 2, 5, 10, 30}) {
        const double want = oracle::brute_log_prob(p, q, n);
        EXPECT_NEAR(ls::exact_log_prob(p, q, n).log_prob, want, 1e-12 * (1.0 + std::abs(want)))
            << p << " " << q << " " << n;
      }
    }
  }
}

TEST(ExactLogProb, TailBoundContract) {
  for (double p : {0.01, 0.3, 0.9}) {
    for (double q : {0.05, 1.0, 6.0}) {
      for (int n : {1, 3, 50}) {
        const auto r = ls::exact_log_prob(p, q, n, 1e-12);
        ASSERT_TRUE(r.converged);
        EXPECT_LE(r.log_prob, 0.0);
        EXPECT_GE(r.terms_used, 1);
        EXPECT_LE(r.log_tail_bound, std::log(1e-12) + r.log_prob);
      }
    }
  }
}

TEST(ExactLogProb, DoublingTermsChangesLittle) {
  for (double p : {0.1, 0.5}) {
    for (double q : {0.5, 2.7}) {
      for (int n : {2, 20, 200}) {
        const double tol = 1e-13;
        const auto r = ls::exact_log_prob(p, q, n, tol);
        const auto doubled = ls::exact_log_prob_terms(p, q, n, 2 * r.terms_used, tol);
        EXPECT_LT(std::abs(std::expm1(doubled.log_prob - r.log_prob)), tol)
            << p << " " << q << " " << n;
      }
    }
  }
}

TEST(ExactLogProb, DecreasingInQ) {
  for (double p : {0.1, 0.5, 0.9}) {
    for (int n : {1, 4, 40}) {
      double prev = 0.0;
      // step 0.37 avoids equal floors at consecutive grid points
      for (double q = 0.1; q < 6.0; q += 0.37) {
        const double v = ls::exact_log_prob(p, q, n).log_prob;
        EXPECT_LT(v, prev) << p << " " << n << " " << q;
        prev = v;
      }
    }
  }
}

TEST(ExactLogProb, DecreasingInN) {
  for (double p : {0.1, 0.5, 0.9}) {
    for (double q : {0.5, 1.0, 2.7}) {
      double prev = 0.0;
      for (int n = 1; n <= 60; ++n) {
        const double v = ls::exact_log_prob(p, q, n).log_prob;
        EXPECT_LT(v, prev) << p << " " << q << " " << n;
        prev = v;
      }
    }
  }
}

TEST(ExactLogProb, DomainErrors) {
  EXPECT_THROW(ls::exact_log_prob(0.5, 0.0, 3), ldwait::domain_error);
  EXPECT_THROW(ls::exact_log_prob(0.5, -1.0, 3), ldwait::domain_error);
  EXPECT_THROW(ls::exact_log_prob(1.0, 1.0, 3), ldwait::domain_error);
  EXPECT_THROW(ls::exact_log_prob(0.5, 1.0, 0), ldwait::domain_error);
  EXPECT_THROW(ls::exact_log_prob(0.5, 1.0, 3, 1e-16), ldwait::domain_error);
  EXPECT_THROW(ls::exact_log_prob_terms(0.5, 1.0, 3, 0), ldwait::domain_error);
}

TEST(SmoothLogProb, HalfOneTwo) {
  EXPECT_NEAR(ls::smooth_log_prob(0.5, 1.0, 2).log_prob, std::log(1.0 / 9.0), 1e-14);
}

TEST(SmoothLogProb, NeedsTwoOccurrences) {
  EXPECT_THROW(ls::smooth_log_prob(0.5, 1.0, 1), ldwait::domain_error);
}

TEST(SmoothLogProb, Sandwich) {
  for (double p : {0.05, 0.1, 0.3, 0.5, 0.9}) {
    for (double q : {0.2, 0.5, 0.7, 1.0, 2.7, 5.5}) {
      for (int n : {2, 3, 10, 50, 200}) {
        const double e = ls::exact_log_prob(p, q, n).log_prob;
        const double s = ls::smooth_log_prob(p, q, n).log_prob;
        EXPECT_LE(std::log1p(-p) + e, s) << p << " " << q << " " << n;
        EXPECT_LE(s, e + std::log1p(1e-12)) << p << " " << q << " " << n;
      }
    }
  }
}

TEST(SmoothLogProb, EqualsExactForIntegerQ) {
  for (double p : {0.1, 0.3, 0.5, 0.9}) {
    for (int q : {1, 2, 5}) {
      for (int n : {2, 5, 10, 50, 200, 1000}) {
        EXPECT_NEAR(ls::smooth_log_prob(p, q, n).log_prob, ls::exact_log_prob(p, q, n).log_prob,
                    1e-12)
            << p << " " << q << " " << n;
      }
    }
  }
}

TEST(ConvergenceTable, ExactAtHalfOne) {
  const auto rows = ls::convergence_table(0.5, 1.0, 40);
  ASSERT_EQ(rows.size(), 40u);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(rows[i].n, static_cast<std::int64_t>(i + 1));
    EXPECT_NEAR(rows[i].a_n, std::log(3.0), 1e-13);
  }
}

TEST(ConvergenceTable, TrendForNonIntegerQ) {
  for (double p : {0.1, 0.3, 0.5}) {
    for (double q : {0.5, 2.7}) {
      const double i = ldwait::rate::rate_i({p, q});
      const auto rows = ls::convergence_table(p, q, 200);
      const double e10 = std::abs(rows[9].a_n - i);
      const double e50 = std::abs(rows[49].a_n - i);
      const double e200 = std::abs(rows[199].a_n - i);
      EXPECT_LT(e200, e50) << p << " " << q;
      EXPECT_LT(e50, e10) << p << " " << q;
      EXPECT_LE(e200, 0.03) << p << " " << q;
    }
  }
}

TEST(ConvergenceTable, PositiveFinite) {
  for (const auto& row : ls::convergence_table(0.1, 2.0, 100)) {
    EXPECT_GT(row.a_n, 0.0);
    EXPECT_TRUE(std::isfinite(row.a_n));
  }
}

TEST(ConvergenceTable, SizeLimit) {
  EXPECT_THROW(ls::convergence_table(0.5, 1.0, 2001), ldwait::domain_error);
  EXPECT_THROW(ls::convergence_table(0.5, 1.0, 0), ldwait::domain_error);
}
