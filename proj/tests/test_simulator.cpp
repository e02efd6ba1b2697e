#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>

#include <gtest/gtest.h>

#include "polylab/constants.hpp"
#include "polylab/io.hpp"
#include "polylab/simulator.hpp"

using namespace polylab;

namespace {

const double E = kGroundEnergy;

// Batches shared by several tests; computed once.
const TrialBatch& batch(int n) {
  static const TrialBatch b10 = run_trials(10, 50, 42, 1);
  static const TrialBatch b16 = run_trials(16, 50, 42, 1);
  return n == 10 ? b10 : b16;
}

}  // namespace

TEST(Prf, OpenUnitInterval) {
  EXPECT_GT(open_unit(0), 0.0);
  EXPECT_LT(open_unit(~std::uint64_t{0}), 1.0);
  EXPECT_GT(exponential_from_bits(~std::uint64_t{0}), 0.0);
  EXPECT_TRUE(std::isfinite(exponential_from_bits(0)));
  // Reference SplitMix64 output for state 0 after one increment.
  EXPECT_EQ(splitmix_finalize(kGolden), 0xE220A8397B1DCDAFull);
}

TEST(EdgeWeight, BitExactReference) {
  // Independent big-integer evaluation of the hash and the log.
  const HypercubeInstance a(16, 42);
  EXPECT_EQ(a.edge_weight(5, 3), 0.8277389361923984);
  EXPECT_EQ(a.edge_weight(13, 3), 0.8277389361923984);
  EXPECT_EQ(HypercubeInstance(4, 7).edge_weight(0, 0), 0.6093648506328991);
}

TEST(EdgeWeight, SameFromBothEndpoints) {
  const HypercubeInstance instance(8, 5);
  for (std::uint32_t v = 0; v < 256; ++v) {
    for (int dim = 0; dim < 8; ++dim) {
      const double w = instance.edge_weight(v, dim);
      EXPECT_GT(w, 0.0);
      EXPECT_EQ(w, instance.edge_weight(v ^ (1u << dim), dim));
    }
  }
}

TEST(EdgeWeight, MeanIsOneAtSixteen) {
  const HypercubeInstance instance(16, 42);
  double sum = 0.0;
  long count = 0;
  for (std::uint32_t v = 0; v < (1u << 16); ++v) {
    for (int dim = 0; dim < 16; ++dim) {
      if ((v >> dim & 1u) == 0) {
        sum += instance.edge_weight(v, dim);
        ++count;
      }
    }
  }
  EXPECT_EQ(count, 16L << 15);
  const double mean = sum / count;
  EXPECT_GE(mean, 0.98);
  EXPECT_LE(mean, 1.02);
  EXPECT_NEAR(mean, 0.99934243673739898, 1e-12);
}

TEST(EdgeWeight, SeedSensitivity) {
  const HypercubeInstance a(8, 1);
  const HypercubeInstance b(8, 2);
  std::vector<double> wa, wb;
  for (std::uint32_t v = 0; v < 256; ++v) {
    for (int dim = 0; dim < 8; ++dim) {
      if ((v >> dim & 1u) == 0) {
        wa.push_back(a.edge_weight(v, dim));
        wb.push_back(b.edge_weight(v, dim));
      }
    }
  }
  std::sort(wa.begin(), wa.end());
  std::sort(wb.begin(), wb.end());
  EXPECT_NE(wa, wb);
}

TEST(EdgeWeight, RejectsBadDimension) {
  const HypercubeInstance instance(4, 1);
  EXPECT_THROW(instance.edge_weight(0, 4), std::invalid_argument);
  EXPECT_THROW(instance.edge_weight(0, -1), std::invalid_argument);
  EXPECT_THROW(HypercubeInstance(0, 1), std::invalid_argument);
  EXPECT_THROW(HypercubeInstance(kMaxDimension + 1, 1), std::invalid_argument);
}

TEST(GroundState, SingleEdge) {
  const HypercubeInstance instance(1, 9);
  const auto gs = ground_state(instance);
  EXPECT_EQ(gs.m_n, instance.edge_weight(0, 0));
  EXPECT_EQ(gs.path.steps, std::vector<int>{1});
  const auto slow = brute_force_ground_state(instance);
  EXPECT_EQ(slow.m_n, gs.m_n);
  EXPECT_EQ(slow.path.steps, gs.path.steps);
}

TEST(GroundState, MatchesExhaustiveSearch) {
  for (int n = 1; n <= 4; ++n) {
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
      const HypercubeInstance instance(n, seed);
      const auto fast = ground_state(instance);
      const auto slow = brute_force_ground_state(instance);
      EXPECT_EQ(fast.m_n, slow.m_n) << n << ' ' << seed;
      EXPECT_EQ(path_violation(instance, fast.path), "");
      EXPECT_EQ(path_violation(instance, slow.path), "");
    }
  }
  const HypercubeInstance seven(3, 7);
  EXPECT_EQ(ground_state(seven).m_n, brute_force_ground_state(seven).m_n);
  const auto eleven = brute_force_ground_state(HypercubeInstance(4, 11));
  EXPECT_GE(eleven.path.length(), 4);
  EXPECT_EQ((eleven.path.length() - 4) % 2, 0);
}

TEST(GroundState, BruteForceRejectsLargeN) {
  EXPECT_THROW(brute_force_ground_state(HypercubeInstance(5, 1)), std::invalid_argument);
}

TEST(GroundState, PathInvariantsAtModerateSize) {
  for (int n : {6, 9, 12}) {
    for (std::uint64_t seed = 100; seed < 110; ++seed) {
      const HypercubeInstance instance(n, seed);
      const auto gs = ground_state(instance);
      EXPECT_GT(gs.m_n, 0.0);
      EXPECT_EQ(path_violation(instance, gs.path), "") << n << ' ' << seed;
      EXPECT_EQ(gs.path.energy, gs.m_n);
    }
  }
}

TEST(GroundState, UnionBoundFloorAtSixteen) {
  double lowest = 1e300;
  for (std::uint64_t seed = 42; seed < 62; ++seed) {
    lowest = std::min(lowest, ground_state(HypercubeInstance(16, seed)).m_n);
  }
  EXPECT_GT(lowest, 0.55);
  EXPECT_NEAR(lowest, 0.8800098467873847, 1e-12);
}

TEST(GroundState, Deterministic) {
  const HypercubeInstance instance(12, 77);
  const auto a = ground_state(instance);
  const auto b = ground_state(instance);
  EXPECT_EQ(a.m_n, b.m_n);
  EXPECT_EQ(a.path.steps, b.path.steps);
}

TEST(GroundState, MemoryCap) {
  ::setenv("POLYLAB_MEM_CAP_MB", "1", 1);
  EXPECT_THROW(ground_state(HypercubeInstance(20, 1)), MemoryCapError);
  EXPECT_NO_THROW(ground_state(HypercubeInstance(10, 1)));
  ::unsetenv("POLYLAB_MEM_CAP_MB");
}

TEST(PathViolation, DetectsBrokenPaths) {
  const HypercubeInstance instance(3, 1);
  PolymerPath good;
  good.steps = {1, 2, 3};
  good.energy = path_energy(instance, good);
  EXPECT_EQ(path_violation(instance, good), "");

  auto wrong_sign = good;
  wrong_sign.steps = {1, -2, 3};
  EXPECT_NE(path_violation(instance, wrong_sign), "");

  auto short_path = good;
  short_path.steps = {1, 2};
  short_path.energy = path_energy(instance, short_path);
  EXPECT_NE(path_violation(instance, short_path), "");

  auto loop = good;
  loop.steps = {1, -1, 1, 2, 3};
  loop.energy = path_energy(instance, loop);
  EXPECT_NE(path_violation(instance, loop), "");
  EXPECT_EQ(path_violation(instance, loop, false), "");

  auto bad_energy = good;
  bad_energy.energy += 0.5;
  EXPECT_NE(path_violation(instance, bad_energy), "");
}

TEST(PathStatistics, DirectedPath) {
  const HypercubeInstance instance(5, 3);
  PolymerPath path;
  path.steps = {1, 2, 3, 4, 5};
  path.energy = path_energy(instance, path);
  const auto stats = path_statistics(instance, path);
  EXPECT_EQ(stats.length, 5);
  EXPECT_EQ(stats.backsteps, 0);
  ASSERT_EQ(stats.profile.size(), 6u);
  for (int j = 0; j <= 5; ++j) {
    EXPECT_DOUBLE_EQ(stats.profile[static_cast<std::size_t>(j)].first, j / 5.0);
    EXPECT_DOUBLE_EQ(stats.profile[static_cast<std::size_t>(j)].second, j / 5.0);
  }
  for (int b = 0; b < kProfileBins; ++b) {
    EXPECT_NEAR(stats.bins[static_cast<std::size_t>(b)], (b + 0.5) / kProfileBins, 1e-12);
  }
  double first_three = 0.0;
  for (int d = 0; d < 3; ++d) {
    first_three += instance.edge_weight((1u << d) - 1, d);
  }
  EXPECT_NEAR(stats.first_half_energy, first_three, 1e-15);
}

TEST(PathStatistics, BackstepDipsDepth) {
  const HypercubeInstance instance(3, 3);
  PolymerPath path;
  path.steps = {1, 2, -1, 1, 3};
  path.energy = path_energy(instance, path);
  const auto stats = path_statistics(instance, path);
  EXPECT_EQ(stats.backsteps, 1);
  EXPECT_EQ(stats.length, 5);
  EXPECT_DOUBLE_EQ(stats.profile[2].second, 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(stats.profile[3].second, 1.0 / 3.0);
  // The backstep leaves from depth 2 of 3, decile 6.
  EXPECT_EQ(stats.decile_backsteps[6], 1);
  int steps = 0;
  for (int s : stats.decile_steps) {
    steps += s;
  }
  EXPECT_EQ(steps, 5);
}

TEST(PathStatistics, BackstepCountMatchesLength) {
  for (const auto& r : batch(16).records) {
    EXPECT_EQ(r.stats.backsteps, (r.stats.length - 16) / 2);
  }
}

TEST(RunTrials, IndependentOfParallelism) {
  const auto serial = run_trials(9, 12, 5, 1);
  const auto parallel = run_trials(9, 12, 5, 4);
  ASSERT_EQ(serial.records.size(), parallel.records.size());
  for (std::size_t t = 0; t < serial.records.size(); ++t) {
    EXPECT_EQ(serial.records[t].seed, 5 + t);
    EXPECT_EQ(serial.records[t].m_n, parallel.records[t].m_n);
    EXPECT_EQ(serial.records[t].path.steps, parallel.records[t].path.steps);
    EXPECT_EQ(trial_to_json(serial.records[t]).dump(), trial_to_json(parallel.records[t]).dump());
  }
  EXPECT_EQ(serial.summary.m_n.mean, parallel.summary.m_n.mean);
  EXPECT_THROW(run_trials(9, 0, 5, 1), std::invalid_argument);
}

TEST(RunTrials, FrozenSummaries) {
  const auto& s10 = batch(10).summary;
  const auto& s16 = batch(16).summary;
  EXPECT_NEAR(s10.m_n.mean, 1.0906935220284766, 1e-12);
  EXPECT_NEAR(s16.m_n.mean, 1.0320822834272234, 1e-12);
  EXPECT_NEAR(s10.length_ratio.mean, 1.124, 1e-12);
  EXPECT_NEAR(s16.length_ratio.mean, 1.19, 1e-12);
  EXPECT_NEAR(s16.first_half_fraction.mean, 0.49822849317128381, 1e-12);
}

TEST(RunTrials, ConvergenceTrends) {
  const auto& s10 = batch(10).summary;
  const auto& s16 = batch(16).summary;
  EXPECT_LT(s16.m_n.mean, s10.m_n.mean);
  EXPECT_GT(s10.m_n.mean, 0.75 * E);
  EXPECT_GT(s16.m_n.mean, 0.75 * E);
  EXPECT_GE(s16.length_ratio.mean, 1.0);
  EXPECT_LE(s16.length_ratio.mean, 1.5);
  EXPECT_LT(std::fabs(s16.length_ratio.mean - kOptimalLength), std::fabs(s10.length_ratio.mean - kOptimalLength));
  EXPECT_GE(s16.first_half_fraction.mean, 0.4);
  EXPECT_LE(s16.first_half_fraction.mean, 0.6);
}

TEST(RunTrials, DepthProfileMonotone) {
  for (int n : {10, 16}) {
    const auto& profile = batch(n).summary.profile;
    for (int b = 1; b < kProfileBins; ++b) {
      const auto& cur = profile[static_cast<std::size_t>(b)];
      EXPECT_GE(cur.mean + cur.standard_error, profile[static_cast<std::size_t>(b - 1)].mean) << n << ' ' << b;
    }
  }
}

TEST(RunTrials, BackstepsAvoidTheStart) {
  const auto& deciles = batch(16).summary.decile_backsteps;
  const double middle = 0.5 * (deciles[4].mean + deciles[5].mean);
  EXPECT_GE(middle + deciles[4].standard_error, deciles[0].mean);
  EXPECT_EQ(deciles[0].mean, 0.0);
}

TEST(RunTrials, LowerBoundConsistency) {
  for (int n : {10, 16}) {
    const auto& records = batch(n).records;
    for (double x : {0.5, 0.6, 0.7, 0.8, 0.9, 1.0}) {
      const auto below = std::count_if(records.begin(), records.end(), [&](const auto& r) { return r.m_n <= x; });
      const double fraction = static_cast<double>(below) / records.size();
      EXPECT_LE(fraction, 10.0 * std::exp(x) * std::pow(std::sinh(x), n)) << n << ' ' << x;
    }
  }
}

TEST(RunTrials, ProfileTracksReferenceCurve) {
  // Mean absolute deviation from sinh(aE l/(Ln)) cosh(E - aE l/(Ln)), n = 18.
  const auto b = run_trials(18, 10, 42, 1);
  double deviation = 0.0;
  long points = 0;
  for (const auto& r : b.records) {
    const double scale = r.stats.length / (18.0 * kOptimalLength);
    for (const auto& [alpha, depth] : r.stats.profile) {
      deviation += std::fabs(depth - std::sinh(alpha * scale * E) * std::cosh((1.0 - alpha * scale) * E));
      ++points;
    }
  }
  deviation /= points;
  EXPECT_NEAR(deviation, 0.051338067580195552, 1e-12);
  EXPECT_LT(deviation, 0.1);
}

TEST(DirectedOverlap, ExactCounts) {
  const long table[8][8] = {{},
                            {0, 1},
                            {1, 0, 1},
                            {3, 2, 0, 1},
                            {14, 6, 3, 0, 1},
                            {77, 29, 9, 4, 0, 1},
                            {497, 160, 45, 12, 5, 0, 1},
                            {3676, 1031, 249, 62, 15, 6, 0, 1}};
  for (int n = 1; n <= 7; ++n) {
    BigInt total = 0;
    for (int k = 0; k <= n; ++k) {
      EXPECT_EQ(directed_overlap_count(n, k), table[n][k]) << n << ' ' << k;
      total += directed_overlap_count(n, k);
    }
    EXPECT_EQ(total, factorial(static_cast<unsigned>(n)));
  }
  EXPECT_THROW(directed_overlap_count(8, 1), std::invalid_argument);
}

TEST(DirectedOverlap, Envelopes) {
  for (int n = 1; n <= 7; ++n) {
    for (int k = 0; k <= n; ++k) {
      const BigInt count = directed_overlap_count(n, k);
      const BigInt rest = factorial(static_cast<unsigned>(n - k));
      EXPECT_LE(count, rest * binomial(static_cast<unsigned>(n), static_cast<unsigned>(k)));
      if (std::pow(k, 4) <= n) {
        EXPECT_LE(count, 2 * rest * (k + 1));
      }
    }
  }
  EXPECT_LE(directed_overlap_count(5, 1), 72);
}

TEST(TrialIo, JsonAndCsvFields) {
  const auto record = run_trial(6, 10, 2);
  EXPECT_EQ(record.seed, 12u);
  const auto json = trial_to_json(record);
  std::vector<std::string> keys;
  for (const auto& item : json.items()) {
    keys.push_back(item.key());
  }
  ASSERT_EQ(keys.size(), 27u);
  EXPECT_EQ(keys[0], "n");
  EXPECT_EQ(keys[6], "e_first_half");
  EXPECT_EQ(keys[7], "bin_00");
  EXPECT_EQ(keys[26], "bin_19");

  std::ostringstream csv;
  write_trial_csv_header(csv);
  write_trial_csv_row(csv, record);
  std::istringstream lines(csv.str());
  std::string header, row;
  std::getline(lines, header);
  std::getline(lines, row);
  EXPECT_EQ(header.rfind("n,seed,trial,m_n,length,backsteps,e_first_half,bin_00", 0), 0u);
  EXPECT_EQ(std::count(header.begin(), header.end(), ','), 26);
  EXPECT_EQ(std::count(row.begin(), row.end(), ','), 26);
  EXPECT_EQ(std::stod(format_double(record.m_n)), record.m_n);
}
