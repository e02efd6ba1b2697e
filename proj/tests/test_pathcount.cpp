#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "polylab/pathcount.hpp"

using namespace polylab;

namespace {
const double E = kGroundEnergy;
}

TEST(StanleyCount, SmallCases) {
  EXPECT_EQ(stanley_count(1, 1, 1), 1);
  EXPECT_EQ(stanley_count(3, 2, 1), 0);
  // Reference values from exhaustive enumeration of step sequences.
  EXPECT_EQ(stanley_count(2, 2, 2), 2);
  EXPECT_EQ(stanley_count(3, 3, 1), 7);
  EXPECT_EQ(stanley_count(3, 3, 3), 6);
  EXPECT_EQ(stanley_count(2, 2, 0), 2);
}

TEST(StanleyCount, EmptyWalkConvention) {
  for (int n = 1; n <= 6; ++n) {
    EXPECT_EQ(stanley_count(n, 0, 0), 1);
    for (int d = 1; d <= n; ++d) {
      EXPECT_EQ(stanley_count(n, 0, d), 0);
    }
  }
}

TEST(StanleyCount, RejectsBadArguments) {
  EXPECT_THROW(stanley_count(3, 2, 4), std::invalid_argument);
  EXPECT_THROW(stanley_count(3, -1, 1), std::invalid_argument);
  EXPECT_THROW(stanley_count(3, 2, -1), std::invalid_argument);
  EXPECT_THROW(stanley_count(0, 2, 0), std::invalid_argument);
}

TEST(StanleyCount, MatchesBruteForceOracle) {
  for (int n = 1; n <= 4; ++n) {
    for (int l = 0; l <= 8; ++l) {
      for (int d = 0; d <= n; ++d) {
        EXPECT_EQ(stanley_count(n, l, d), brute_force_walk_count(n, l, d)) << n << ' ' << l << ' ' << d;
      }
    }
  }
}

TEST(StanleyCount, ParityAndFeasibility) {
  for (int n = 1; n <= 7; ++n) {
    for (int l = 0; l <= 14; ++l) {
      for (int d = 0; d <= n; ++d) {
        const bool feasible = l >= d && (l - d) % 2 == 0;
        const auto count = stanley_count(n, l, d);
        EXPECT_GE(count, 0);
        EXPECT_EQ(count == 0, !feasible) << n << ' ' << l << ' ' << d;
      }
    }
  }
}

TEST(StanleyCount, RowAgreesWithPointwise) {
  const auto row = stanley_row(9, 4, 30);
  for (int l = 0; l <= 30; ++l) {
    EXPECT_EQ(row[static_cast<std::size_t>(l)], stanley_count(9, l, 4));
  }
}

TEST(StanleyCount, DirectedWalksAreFactorial) {
  // l = d = n leaves no room for backsteps: n! orderings.
  for (int n = 1; n <= 12; ++n) {
    EXPECT_EQ(stanley_count(n, n, n), factorial(static_cast<unsigned>(n)));
  }
}

TEST(PathCountTable, StoresEveryCell) {
  const PathCountTable table(5, 12);
  EXPECT_EQ(table.counts().size(), 13u * 6u);
  EXPECT_EQ(table.at(0, 0), 1);
  EXPECT_EQ(table.at(5, 5), 120);
  EXPECT_EQ(table.at(7, 3), stanley_count(5, 7, 3));
  EXPECT_THROW(table.at(13, 0), std::out_of_range);
}

TEST(BruteForceWalkCount, Examples) {
  EXPECT_EQ(brute_force_walk_count(2, 2, 0), 2);
  EXPECT_EQ(brute_force_walk_count(1, 3, 1), 1);
  EXPECT_EQ(brute_force_walk_count(3, 3, 3), 6);
  EXPECT_THROW(brute_force_walk_count(7, 2, 1), std::invalid_argument);
  EXPECT_THROW(brute_force_walk_count(3, 13, 1), std::invalid_argument);
}

TEST(BigIntLog, LargeValues) {
  const BigInt big = boost::multiprecision::pow(BigInt(3), 2000u);
  EXPECT_NEAR(log_of(big), 2000 * std::log(3.0), 1e-12 * 2000 * std::log(3.0));
  EXPECT_NEAR(log_ratio(big, boost::multiprecision::pow(BigInt(3), 1998u)), std::log(9.0), 1e-14);
  EXPECT_DOUBLE_EQ(ratio_of(BigInt(1), BigInt(3)), 1.0 / 3.0);
}

TEST(IdentityResidual, Examples) {
  EXPECT_LT(identity_residual(1, 1, 1.0, 30), 1e-12);
  EXPECT_LT(identity_residual(2, 0, 0.5, 30), 1e-12);
  EXPECT_LT(identity_residual(3, 3, E, 60), 1e-10);
  EXPECT_THROW(identity_residual(2, 1, 0.0, 10), std::invalid_argument);
}

TEST(IdentityResidual, WithinRemainderBoundUpToTen) {
  for (int n = 1; n <= 10; ++n) {
    for (int d = 0; d <= n; ++d) {
      for (double x : {0.5, E, 1.5}) {
        const int l_max = identity_truncation(n, x, 1e-12);
        ASSERT_LT(identity_remainder_bound(n, x, l_max), 1e-12);
        EXPECT_LE(identity_residual(n, d, x, l_max), identity_remainder_bound(n, x, l_max) + 1e-10)
            << n << ' ' << d << ' ' << x;
      }
    }
  }
}

TEST(IdentityResidual, TruncationTooShortIsVisible) {
  // Dropping most of the series must show up as a large residual.
  EXPECT_GT(identity_residual(6, 6, 1.5, 6), 1.0);
}

TEST(MBound, Examples) {
  EXPECT_NEAR(m_bound(2, 2, 2, 1.0), std::pow(std::sinh(1.0), 2) * 2.0, 1e-12);
  EXPECT_GE(m_bound(2, 2, 2, 1.0), 2.0);
  for (double x : {1e-6, 0.1, 1.0, 3.0}) {
    EXPECT_GE(m_bound(1, 1, 1, x), 1.0);
  }
  EXPECT_NEAR(m_bound(1, 1, 1, 1e-6), 1.0, 1e-9);
  const int l = static_cast<int>(std::lround(kOptimalLength * 10));
  const double expected = std::exp(std::lgamma(l + 1.0) - l * std::log(E));
  EXPECT_NEAR(m_bound(10, l, 10, E) / expected, 1.0, 1e-9);
}

TEST(MBound, DominatesCounts) {
  for (int n = 1; n <= 10; ++n) {
    for (int d = 0; d <= n; ++d) {
      const auto row = stanley_row(n, d, 20);
      for (int l = 0; l <= 20; ++l) {
        for (double x : {0.25, 0.5, E, 1.0, 2.0}) {
          EXPECT_LE(log_of(row[static_cast<std::size_t>(l)]), log_m_bound(n, l, d, x) + 1e-12);
        }
      }
    }
  }
}

TEST(MBound, ReportsOverflow) { EXPECT_THROW(m_bound(10, 400, 10, 0.01), std::overflow_error); }

TEST(SolveLengthRatio, Examples) {
  EXPECT_NEAR(solve_length_ratio(kOptimalLength), E, 1e-12);
  EXPECT_NEAR(E, 0.8813735870, 1e-10);
  EXPECT_EQ(solve_length_ratio(1.0), 0.0);
  const double x = solve_length_ratio(2.0);
  EXPECT_NEAR(x / std::tanh(x), 2.0, 1e-12);
  EXPECT_THROW(solve_length_ratio(0.99), std::invalid_argument);
}

TEST(SolveLengthRatio, TwoSidedInverseProperty) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> ratio_dist(1.0001, 10.0);
  std::uniform_real_distribution<double> x_dist(0.02, 9.0);
  for (int trial = 0; trial < 2000; ++trial) {
    const double ratio = ratio_dist(rng);
    const double x = solve_length_ratio(ratio);
    EXPECT_NEAR(x / std::tanh(x), ratio, 1e-11);
    const double y = x_dist(rng);
    EXPECT_NEAR(solve_length_ratio(y / std::tanh(y)), y, 1e-11);
  }
}

TEST(LengthWeights, SingleDimension) {
  const auto dist = length_weight_distribution(1, 40);
  for (int l = 0; l <= 40; ++l) {
    if (l % 2 == 0) {
      EXPECT_EQ(dist.weights[static_cast<std::size_t>(l)], 0.0);
    }
  }
  EXPECT_NEAR(dist.weights[1], E, 1e-15);
  EXPECT_NEAR(dist.total(), 1.0, 1e-12);
}

TEST(LengthWeights, PeakNearOptimalLength) {
  // Exact reference: the n = 100 weights peak at l = 124.
  const auto dist = length_weight_distribution(100, 300);
  EXPECT_EQ(dist.argmax(), 124);
  EXPECT_GE(dist.argmax(), 123);
  EXPECT_LE(dist.argmax(), 127);
  for (int n : {20, 40, 80}) {
    const auto d = length_weight_distribution(n, 3 * n);
    EXPECT_LE(std::abs(d.argmax() - std::lround(kOptimalLength * n)), 2) << n;
  }
}

TEST(LengthWeights, Normalization) {
  for (int n : {1, 2, 5, 10, 40, 100, 200}) {
    const auto dist = length_weight_distribution(n, 3 * n);
    const double total = dist.total();
    EXPECT_LE(total, 1.0 + 1e-12) << n;
    EXPECT_GE(total + dist.tail_bound, 1.0 - 1e-12) << n;
    EXPECT_NEAR(total, 1.0, dist.tail_bound + 1e-10) << n;
    for (double w : dist.weights) {
      EXPECT_GE(w, 0.0);
    }
  }
  EXPECT_THROW(length_weight_distribution(10, 29), std::invalid_argument);
}

TEST(ConcentrationTails, DecayWithDimension) {
  const double a = E / 2 + kOptimalLength + 1 / std::sqrt(2.0) + 0.1;
  EXPECT_NEAR(a, 2.495, 1e-3);
  const auto t40 = concentration_tail_mass(40, 0.2, a);
  const auto t80 = concentration_tail_mass(80, 0.2, a);
  EXPECT_LT(t80.upper_tail, t40.upper_tail);
  EXPECT_LE(t80.lower_tail, t40.lower_tail);
  // (L - a eps) n < n: no walk is short enough to land in the lower tail.
  EXPECT_EQ(t40.lower_tail, 0.0);
}

TEST(ConcentrationTails, FrozenReferenceValues) {
  // Exact-integer evaluation in an independent implementation.
  const auto t40 = concentration_tail_mass(40, 0.2, 2.5);
  const auto t80 = concentration_tail_mass(80, 0.2, 2.5);
  EXPECT_NEAR(t40.upper_tail / 0.0027855549185201323, 1.0, 1e-8);
  EXPECT_NEAR(t80.upper_tail / 3.590969033760554e-05, 1.0, 1e-8);
  const double squaring = t80.upper_tail / (t40.upper_tail * t40.upper_tail);
  EXPECT_GT(squaring, 0.1);
  EXPECT_LT(squaring, 10.0);
}

TEST(ConcentrationTails, ZeroWindowPartitionsTheSum) {
  for (int n : {10, 40}) {
    const auto t = concentration_tail_mass(n, 0.2, 0.0);
    EXPECT_NEAR(t.total, std::pow(std::sinh(E + 0.04), n), 1e-12 * t.total);
    EXPECT_GE((t.lower_tail + t.upper_tail) / t.total, 1.0 - 1e-9);
  }
}

TEST(ConcentrationTails, RejectsBadArguments) {
  EXPECT_THROW(concentration_tail_mass(10, 0.0, 1.0), std::invalid_argument);
  EXPECT_THROW(concentration_tail_mass(10, 0.3, 1.0), std::invalid_argument);
  EXPECT_THROW(concentration_tail_mass(10, 0.2, -1.0), std::invalid_argument);
}
