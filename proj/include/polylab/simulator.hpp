#pragma once

// First-passage percolation on the n-hypercube.
//
// Vertices are n-bit masks. Edge weights are never stored: each one is a
// pure function of (seed, edge), so instances are cheap to copy and any
// thread can regenerate any weight.

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <functional>
#include <limits>
#include <numeric>
#include <queue>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "polylab/bigint.hpp"
#include "polylab/prf.hpp"

namespace polylab {

inline constexpr int kMaxDimension = 26;
inline constexpr int kProfileBins = 20;
inline constexpr int kDepthDeciles = 10;

class MemoryCapError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Distance-buffer cap in MiB; POLYLAB_MEM_CAP_MB overrides the default.
inline std::size_t memory_cap_bytes() {
  std::size_t megabytes = 2048;
  if (const char* env = std::getenv("POLYLAB_MEM_CAP_MB"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    const unsigned long long parsed = std::strtoull(env, &end, 10);
    if (end != nullptr && *end == '\0' && parsed > 0) {
      megabytes = static_cast<std::size_t>(parsed);
    }
  }
  return megabytes << 20;
}

class HypercubeInstance {
 public:
  HypercubeInstance(int n, std::uint64_t seed) : n_(n), seed_(seed) {
    if (n < 1 || n > kMaxDimension) {
      throw std::invalid_argument("dimension must lie in [1, " + std::to_string(kMaxDimension) + "], got " +
                                  std::to_string(n));
    }
  }

  int n() const { return n_; }
  std::uint64_t seed() const { return seed_; }
  std::uint32_t origin() const { return 0; }
  std::uint32_t target() const { return static_cast<std::uint32_t>((std::uint64_t{1} << n_) - 1); }

  /// Exp(1) weight of the edge leaving `vertex` along `dim`. Both endpoints
  /// of an edge map to the same key (the endpoint with bit `dim` cleared).
  double edge_weight(std::uint32_t vertex, int dim) const {
    if (dim < 0 || dim >= n_) {
      throw std::invalid_argument("edge dimension " + std::to_string(dim) + " out of range for n=" +
                                  std::to_string(n_));
    }
    return weight_unchecked(vertex, dim);
  }

  double weight_unchecked(std::uint32_t vertex, int dim) const {
    const std::uint64_t key = vertex & ~(std::uint32_t{1} << dim);
    const std::uint64_t h =
        splitmix_finalize(seed_ ^ (key * kGolden) ^ (static_cast<std::uint64_t>(dim + 1) * kDimSalt));
    return exponential_from_bits(h);
  }

 private:
  int n_;
  std::uint64_t seed_;
};

/// A walk from the origin: step +k sets bit k-1, step -k clears it.
struct PolymerPath {
  std::vector<int> steps;
  double energy = 0.0;

  int length() const { return static_cast<int>(steps.size()); }

  std::vector<std::uint32_t> vertices() const {
    std::vector<std::uint32_t> out{0};
    std::uint32_t v = 0;
    for (int s : steps) {
      v ^= std::uint32_t{1} << (std::abs(s) - 1);
      out.push_back(v);
    }
    return out;
  }
};

/// Sum of edge weights along the path, accumulated from the origin.
inline double path_energy(const HypercubeInstance& instance, const PolymerPath& path) {
  double energy = 0.0;
  std::uint32_t v = 0;
  for (int s : path.steps) {
    const int dim = std::abs(s) - 1;
    energy += instance.edge_weight(v, dim);
    v ^= std::uint32_t{1} << dim;
  }
  return energy;
}

/// Empty string when the path is a valid polymer from 0 to 1...1, otherwise
/// a description of the first violated invariant.
inline std::string path_violation(const HypercubeInstance& instance, const PolymerPath& path,
                                  bool require_loopless = true) {
  std::uint32_t v = 0;
  std::vector<bool> seen;
  if (require_loopless) {
    seen.assign(std::size_t{1} << instance.n(), false);
    seen[0] = true;
  }
  for (std::size_t j = 0; j < path.steps.size(); ++j) {
    const int s = path.steps[j];
    if (s == 0 || std::abs(s) > instance.n()) {
      return "step " + std::to_string(j) + " has invalid direction " + std::to_string(s);
    }
    const std::uint32_t bit = std::uint32_t{1} << (std::abs(s) - 1);
    if (((v & bit) != 0) != (s < 0)) {
      return "step " + std::to_string(j) + " sign does not match the flipped bit";
    }
    v ^= bit;
    if (require_loopless) {
      if (seen[v]) {
        return "vertex repeats at step " + std::to_string(j);
      }
      seen[v] = true;
    }
  }
  if (v != instance.target()) {
    return "path does not end at the all-ones vertex";
  }
  const double recomputed = path_energy(instance, path);
  if (std::fabs(recomputed - path.energy) > 1e-9 * std::max(1.0, std::fabs(recomputed))) {
    return "stored energy disagrees with the edge weights";
  }
  if (path.length() < instance.n() || (path.length() - instance.n()) % 2 != 0) {
    return "length parity violated";
  }
  return {};
}

struct GroundState {
  double m_n = 0.0;
  PolymerPath path;
};

/// Minimal-energy polymer via Dijkstra from the origin to the all-ones vertex.
inline GroundState ground_state(const HypercubeInstance& instance) {
  const int n = instance.n();
  const std::size_t vertices = std::size_t{1} << n;
  const std::size_t needed = vertices * (sizeof(double) + sizeof(std::uint8_t));
  if (needed > memory_cap_bytes()) {
    throw MemoryCapError("ground state at n=" + std::to_string(n) + " needs " + std::to_string(needed >> 20) +
                         " MiB, cap is " + std::to_string(memory_cap_bytes() >> 20) + " MiB");
  }
  constexpr std::uint8_t kNone = 0xFF;
  std::vector<double> dist(vertices, std::numeric_limits<double>::infinity());
  std::vector<std::uint8_t> via(vertices, kNone);  // dimension flipped to reach the vertex

  using Entry = std::pair<double, std::uint32_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> frontier;
  dist[0] = 0.0;
  frontier.emplace(0.0, 0u);
  const std::uint32_t target = instance.target();
  while (!frontier.empty()) {
    const auto [du, u] = frontier.top();
    frontier.pop();
    if (du > dist[u]) {
      continue;  // stale
    }
    if (u == target) {
      break;
    }
    for (int dim = 0; dim < n; ++dim) {
      const std::uint32_t v = u ^ (std::uint32_t{1} << dim);
      const double candidate = du + instance.weight_unchecked(u, dim);
      if (candidate < dist[v]) {
        dist[v] = candidate;
        via[v] = static_cast<std::uint8_t>(dim);
        frontier.emplace(candidate, v);
      } else if (candidate == dist[v] && dim < via[v]) {
        via[v] = static_cast<std::uint8_t>(dim);
      }
    }
  }

  GroundState result;
  result.m_n = dist[target];
  std::uint32_t v = target;
  while (v != 0) {
    const int dim = via[v];
    const std::uint32_t bit = std::uint32_t{1} << dim;
    result.path.steps.push_back((v & bit) != 0 ? dim + 1 : -(dim + 1));
    v ^= bit;
  }
  std::reverse(result.path.steps.begin(), result.path.steps.end());
  result.path.energy = result.m_n;
  return result;
}

/// Exhaustive search over all simple paths; oracle for n <= 4.
inline GroundState brute_force_ground_state(const HypercubeInstance& instance) {
  if (instance.n() > 4) {
    throw std::invalid_argument("brute-force ground state is limited to n <= 4");
  }
  const int n = instance.n();
  const std::uint32_t target = instance.target();
  GroundState best;
  best.m_n = std::numeric_limits<double>::infinity();
  std::vector<int> steps;
  std::uint32_t visited = 1;  // bit v set when vertex v is on the current path

  const std::function<void(std::uint32_t, double)> extend = [&](std::uint32_t u, double energy) {
    if (u == target) {
      if (energy < best.m_n) {
        best.m_n = energy;
        best.path.steps = steps;
      }
      return;
    }
    for (int dim = 0; dim < n; ++dim) {
      const std::uint32_t v = u ^ (std::uint32_t{1} << dim);
      if ((visited >> v) & 1u) {
        continue;
      }
      visited |= 1u << v;
      steps.push_back((v >> dim) & 1u ? dim + 1 : -(dim + 1));
      extend(v, energy + instance.weight_unchecked(u, dim));
      steps.pop_back();
      visited &= ~(1u << v);
    }
  };
  extend(0, 0.0);
  best.path.energy = best.m_n;
  return best;
}

/// Per-path observables.
struct PathStatistics {
  int length = 0;
  int backsteps = 0;
  /// (j / l, d_j / n) for j = 0..l.
  std::vector<std::pair<double, double>> profile;
  /// Average depth over each of the 20 equal alpha-bins.
  std::array<double, kProfileBins> bins{};
  /// Backsteps taken from a depth in decile [k/10, (k+1)/10).
  std::array<int, kDepthDeciles> decile_backsteps{};
  /// Steps taken from a depth in each decile.
  std::array<int, kDepthDeciles> decile_steps{};
  /// Energy of the first ceil(l / 2) steps.
  double first_half_energy = 0.0;
};

namespace detail {

// Mean of the piecewise-linear profile over [lo, hi].
inline double profile_average(const std::vector<std::pair<double, double>>& profile, double lo, double hi) {
  double area = 0.0;
  for (std::size_t j = 0; j + 1 < profile.size(); ++j) {
    const auto [x0, y0] = profile[j];
    const auto [x1, y1] = profile[j + 1];
    const double a = std::max(lo, x0);
    const double b = std::min(hi, x1);
    if (b <= a) {
      continue;
    }
    const double slope = (y1 - y0) / (x1 - x0);
    const double ya = y0 + slope * (a - x0);
    const double yb = y0 + slope * (b - x0);
    area += 0.5 * (ya + yb) * (b - a);
  }
  return area / (hi - lo);
}

}  // namespace detail

inline PathStatistics path_statistics(const HypercubeInstance& instance, const PolymerPath& path) {
  const int n = instance.n();
  PathStatistics stats;
  stats.length = path.length();
  const double l = std::max(1, stats.length);
  std::uint32_t v = 0;
  int depth = 0;
  const int half = (stats.length + 1) / 2;
  stats.profile.emplace_back(0.0, 0.0);
  for (int j = 0; j < stats.length; ++j) {
    const int s = path.steps[static_cast<std::size_t>(j)];
    const int dim = std::abs(s) - 1;
    const int decile = std::min(kDepthDeciles - 1, depth * kDepthDeciles / n);
    ++stats.decile_steps[static_cast<std::size_t>(decile)];
    if (s < 0) {
      ++stats.backsteps;
      ++stats.decile_backsteps[static_cast<std::size_t>(decile)];
    }
    if (j < half) {
      stats.first_half_energy += instance.edge_weight(v, dim);
    }
    v ^= std::uint32_t{1} << dim;
    depth += s > 0 ? 1 : -1;
    stats.profile.emplace_back((j + 1) / l, static_cast<double>(depth) / n);
  }
  for (int b = 0; b < kProfileBins; ++b) {
    stats.bins[static_cast<std::size_t>(b)] =
        detail::profile_average(stats.profile, static_cast<double>(b) / kProfileBins,
                                static_cast<double>(b + 1) / kProfileBins);
  }
  return stats;
}

struct TrialRecord {
  int n = 0;
  std::uint64_t seed = 0;
  std::uint64_t trial = 0;
  double m_n = 0.0;
  PolymerPath path;
  PathStatistics stats;
};

inline TrialRecord run_trial(int n, std::uint64_t base_seed, std::uint64_t trial) {
  TrialRecord record;
  record.n = n;
  record.seed = base_seed + trial;
  record.trial = trial;
  const HypercubeInstance instance(n, record.seed);
  auto gs = ground_state(instance);
  record.m_n = gs.m_n;
  record.stats = path_statistics(instance, gs.path);
  record.path = std::move(gs.path);
  return record;
}

struct MeanStd {
  double mean = 0.0;
  double stddev = 0.0;
  double standard_error = 0.0;
};

template <class Range>
MeanStd mean_std(const Range& values) {
  MeanStd out;
  const auto count = static_cast<double>(std::size(values));
  if (count == 0) {
    return out;
  }
  for (double v : values) {
    out.mean += v;
  }
  out.mean /= count;
  if (count > 1) {
    double ss = 0.0;
    for (double v : values) {
      ss += (v - out.mean) * (v - out.mean);
    }
    out.stddev = std::sqrt(ss / (count - 1));
    out.standard_error = out.stddev / std::sqrt(count);
  }
  return out;
}

struct TrialSummary {
  int n = 0;
  std::size_t trials = 0;
  MeanStd m_n;
  MeanStd length_ratio;
  MeanStd first_half_fraction;
  std::array<MeanStd, kProfileBins> profile{};
  std::array<MeanStd, kDepthDeciles> decile_backsteps{};
  /// Pooled backsteps / steps per depth decile.
  std::array<double, kDepthDeciles> decile_backstep_fraction{};
};

inline TrialSummary summarize(const std::vector<TrialRecord>& records) {
  TrialSummary summary;
  summary.trials = records.size();
  if (records.empty()) {
    return summary;
  }
  summary.n = records.front().n;
  std::vector<double> m, ratio, half;
  for (const auto& r : records) {
    m.push_back(r.m_n);
    ratio.push_back(static_cast<double>(r.stats.length) / r.n);
    half.push_back(r.stats.first_half_energy / r.m_n);
  }
  summary.m_n = mean_std(m);
  summary.length_ratio = mean_std(ratio);
  summary.first_half_fraction = mean_std(half);
  std::vector<double> column(records.size());
  for (int b = 0; b < kProfileBins; ++b) {
    for (std::size_t t = 0; t < records.size(); ++t) {
      column[t] = records[t].stats.bins[static_cast<std::size_t>(b)];
    }
    summary.profile[static_cast<std::size_t>(b)] = mean_std(column);
  }
  for (int k = 0; k < kDepthDeciles; ++k) {
    long backsteps = 0, steps = 0;
    for (std::size_t t = 0; t < records.size(); ++t) {
      column[t] = records[t].stats.decile_backsteps[static_cast<std::size_t>(k)];
      backsteps += records[t].stats.decile_backsteps[static_cast<std::size_t>(k)];
      steps += records[t].stats.decile_steps[static_cast<std::size_t>(k)];
    }
    summary.decile_backsteps[static_cast<std::size_t>(k)] = mean_std(column);
    summary.decile_backstep_fraction[static_cast<std::size_t>(k)] =
        steps == 0 ? 0.0 : static_cast<double>(backsteps) / static_cast<double>(steps);
  }
  return summary;
}

struct TrialBatch {
  std::vector<TrialRecord> records;
  TrialSummary summary;
};

/// Trial t uses seed base_seed + t. Records come back in trial order, so the
/// result does not depend on `parallelism`.
inline TrialBatch run_trials(int n, std::size_t trials, std::uint64_t base_seed, unsigned parallelism = 1) {
  if (trials < 1) {
    throw std::invalid_argument("run_trials needs at least one trial");
  }
  TrialBatch batch;
  batch.records.resize(trials);
  parallelism = std::clamp(parallelism, 1u, static_cast<unsigned>(trials));
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> failures(parallelism);
  {
    std::vector<std::jthread> workers;
    for (unsigned w = 0; w < parallelism; ++w) {
      workers.emplace_back([&, w] {
        try {
          for (std::size_t t = next++; t < trials; t = next++) {
            batch.records[t] = run_trial(n, base_seed, t);
          }
        } catch (...) {
          failures[w] = std::current_exception();
          next = trials;
        }
      });
    }
  }
  for (const auto& failure : failures) {
    if (failure) {
      std::rethrow_exception(failure);
    }
  }
  batch.summary = summarize(batch.records);
  return batch;
}

/// Number of directed paths (orderings of the n coordinates) sharing exactly
/// k edges with the reference ordering 1, 2, ..., n.
inline BigInt directed_overlap_count(int n, int k) {
  if (n < 1 || n > 7) {
    throw std::invalid_argument("directed overlap enumeration is limited to 1 <= n <= 7");
  }
  if (k < 0 || k > n) {
    return 0;
  }
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  long count = 0;
  do {
    // Edge i is shared iff the first i coordinates are {0..i-1} and the
    // i-th flipped coordinate is i.
    int shared = 0;
    int prefix_max = -1;
    for (int i = 0; i < n; ++i) {
      const int c = order[static_cast<std::size_t>(i)];
      if (prefix_max == i - 1 && c == i) {
        ++shared;
      }
      prefix_max = std::max(prefix_max, c);
    }
    count += shared == k ? 1 : 0;
  } while (std::next_permutation(order.begin(), order.end()));
  return count;
}

}  // namespace polylab
