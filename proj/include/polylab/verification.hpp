#pragma once

// Invariant battery behind `polylab verify`. Each check is small enough to
// run on every build; `fast` trims the sizes further.

#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "polylab/constants.hpp"
#include "polylab/geometry.hpp"
#include "polylab/pathcount.hpp"
#include "polylab/simulator.hpp"
#include "polylab/stochastics.hpp"

namespace polylab {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

namespace detail {

inline CheckResult run_check(const std::string& name, const std::function<std::string()>& body) {
  try {
    const std::string failure = body();
    return {name, failure.empty(), failure.empty() ? "ok" : failure};
  } catch (const std::exception& e) {
    return {name, false, std::string("exception: ") + e.what()};
  }
}

template <class... Parts>
std::string describe(const Parts&... parts) {
  std::ostringstream out;
  out.precision(17);
  (out << ... << parts);
  return out.str();
}

}  // namespace detail

inline std::vector<CheckResult> run_verification(bool fast) {
  std::vector<CheckResult> results;
  const double E = kGroundEnergy;
  const int k_max = fast ? 16 : 64;

  results.push_back(detail::run_check("walk counts match brute force (n<=4, l<=8)", [] {
    for (int n = 1; n <= 4; ++n) {
      for (int l = 0; l <= 8; ++l) {
        for (int d = 0; d <= n; ++d) {
          if (stanley_count(n, l, d) != brute_force_walk_count(n, l, d)) {
            return detail::describe("mismatch at n=", n, " l=", l, " d=", d);
          }
        }
      }
    }
    return std::string{};
  }));

  results.push_back(detail::run_check("generating-function identity residuals", [&] {
    const int n_max = fast ? 6 : 10;
    for (int n = 1; n <= n_max; ++n) {
      for (int d : {0, n / 2, n}) {
        for (double x : {0.5, E, 1.5}) {
          const int l_max = identity_truncation(n, x, 1e-12);
          const double residual = identity_residual(n, d, x, l_max);
          if (residual > identity_remainder_bound(n, x, l_max) + 1e-10) {
            return detail::describe("residual ", residual, " at n=", n, " d=", d, " x=", x);
          }
        }
      }
    }
    return std::string{};
  }));

  results.push_back(detail::run_check("M-bound dominates walk counts", [&] {
    const int n_max = fast ? 6 : 10;
    const int l_cap = fast ? 12 : 20;
    for (int n = 1; n <= n_max; ++n) {
      for (int d = 0; d <= n; ++d) {
        const auto row = stanley_row(n, d, l_cap);
        for (int l = 0; l <= l_cap; ++l) {
          for (double x : {0.25, 0.5, E, 1.0, 2.0}) {
            if (log_of(row[static_cast<std::size_t>(l)]) > log_m_bound(n, l, d, x) + 1e-12) {
              return detail::describe("bound fails at n=", n, " l=", l, " d=", d, " x=", x);
            }
          }
        }
      }
    }
    return std::string{};
  }));

  results.push_back(detail::run_check("hyperbolic constants of arcsinh(1)", [&] {
    const double errors[] = {std::sinh(E) - 1.0, std::cosh(E) - std::numbers::sqrt2,
                             std::tanh(E) - 1.0 / std::numbers::sqrt2, E / std::tanh(E) - kOptimalLength};
    for (double e : errors) {
      if (std::fabs(e) > 1e-12) {
        return detail::describe("constant error ", e);
      }
    }
    return std::string{};
  }));

  results.push_back(detail::run_check("x/tanh(x) inversion", [] {
    for (double ratio = 1.0001; ratio <= 10.0; ratio += 0.0999) {
      const double x = solve_length_ratio(ratio);
      if (std::fabs(x / std::tanh(x) - ratio) > 1e-11) {
        return detail::describe("inverse residual at ratio ", ratio);
      }
    }
    return std::string{};
  }));

  results.push_back(detail::run_check("coarse-graining invariants", [&] {
    for (int K = 1; K <= k_max; ++K) {
      const auto cg = solve_coarse_graining(K);
      double total = 0.0;
      for (int i = 1; i <= K; ++i) {
        const auto s = static_cast<std::size_t>(i - 1);
        total += cg.a[s];
        const bool ok = std::fabs(cg.a[s] - cg.a[static_cast<std::size_t>(K - i)]) <= 1e-12 &&
                        cg.a[s] <= 1.0 / (K * E) + 1e-15 &&
                        std::fabs(std::sinh(cg.abar[s + 1] * E) * std::cosh(cg.aunder[s + 1] * E) -
                                  static_cast<double>(i) / K) <= 1e-10 &&
                        std::fabs(cg.ef[s] + cg.eb[s] - cg.d[s]) <= 1e-12 &&
                        std::fabs(cg.ef[s] - cg.eb[s] - 1.0 / K) <= 1e-12 && cg.eb[s] <= 1.0 / (2 * K) + 1e-15 &&
                        cg.ef[s] - 2 * cg.eb[s] > 0.0;
        if (!ok) {
          return detail::describe("invariant broken at K=", K, " i=", i);
        }
      }
      if (std::fabs(total - 1.0) > 1e-12) {
        return detail::describe("lengths sum to ", total, " at K=", K);
      }
    }
    return std::string{};
  }));

  results.push_back(detail::run_check("F-function maximum and closed-form maximizer", [&] {
    for (int K = 2; K <= k_max; K *= 2) {
      const auto cg = solve_coarse_graining(K);
      const double peak = f_function(cg, cg.d);
      if (std::fabs(peak - 1.0) > 1e-9) {
        return detail::describe("F at optimum = ", peak, " for K=", K);
      }
      for (int j = 2; j < K; ++j) {
        if (std::fabs(optimal_d_closed_form(cg, j) - cg.d[static_cast<std::size_t>(j - 1)]) > 1e-10) {
          return detail::describe("closed-form maximizer off at K=", K, " j=", j);
        }
        for (double delta : {-0.01, 0.01}) {
          auto moved = cg.d;
          moved[static_cast<std::size_t>(j - 1)] += delta;
          const auto [lo, hi] = slab_domain(cg, j);
          if (moved[static_cast<std::size_t>(j - 1)] < lo || moved[static_cast<std::size_t>(j - 1)] > hi) {
            continue;  // no paths realize such a depth
          }
          if (!(f_function(cg, moved) < 1.0)) {
            return detail::describe("perturbation does not decrease F at K=", K, " j=", j);
          }
        }
      }
    }
    return std::string{};
  }));

  results.push_back(detail::run_check("evolution products", [&] {
    for (int K = 1; K <= k_max; ++K) {
      const auto cg = solve_coarse_graining(K);
      for (int i = 1; i <= K; ++i) {
        if (std::fabs(evolution_product(cg, i) - evolution_closed_form(cg, i)) > 1e-9) {
          return detail::describe("partial product off at K=", K, " i=", i);
        }
      }
      if (std::fabs(evolution_product(cg, K) - 1.0) > 1e-9) {
        return detail::describe("full product off at K=", K);
      }
    }
    return std::string{};
  }));

  results.push_back(detail::run_check("slab identities for effective steps", [] {
    for (int K : {4, 8, 16}) {
      const auto cg = solve_coarse_graining(K);
      for (int j = 2; j < K; ++j) {
        for (double r : slab_identity_residuals(cg, j)) {
          if (std::fabs(r) > 1e-10) {
            return detail::describe("identity residual ", r, " at K=", K, " j=", j);
          }
        }
      }
    }
    return std::string{};
  }));

  results.push_back(detail::run_check("scalar claims (theta_hat, g1, g2)", [&] {
    const auto report = verify_scalar_claims(fast ? 1e-3 : 1e-4);
    for (const auto& item : report.items) {
      if (!item.passed) {
        return detail::describe(item.name, " measured ", item.measured);
      }
    }
    return std::string{};
  }));

  results.push_back(detail::run_check("Erlang tail-ratio bounds", [] {
    for (int l = 1; l <= 50; ++l) {
      for (double x : {0.1, 0.5, 1.0, kGroundEnergy, 2.0, 5.0}) {
        const double ratio = erlang_tail_ratio(l, x);
        if (ratio < 0.0 || ratio > std::exp(x) * x / (l + 1)) {
          return detail::describe("ratio ", ratio, " at l=", l, " x=", x);
        }
      }
    }
    return std::string{};
  }));

  results.push_back(detail::run_check("overlap kernel boundary cases", [] {
    for (int l = 2; l <= 8; ++l) {
      for (double x : {0.5, 1.0, 2.0}) {
        const double none = overlap_probability_quadrature({l, 0, x});
        const double all = overlap_probability_quadrature({l, l, x});
        const double p = erlang_cdf(l, x);
        if (std::fabs(none - p * p) > 1e-10 * p * p || std::fabs(all - p) > 1e-10 * p) {
          return detail::describe("closed forms disagree at l=", l, " x=", x);
        }
      }
    }
    for (long i = 0; i <= 100000; ++i) {
      if (overlap_g(i * 1e-5) > 1.0 + 1e-12) {
        return detail::describe("g exceeds 1 at ", i * 1e-5);
      }
    }
    return std::string{};
  }));

  results.push_back(detail::run_check("ground state matches exhaustive search (n<=4)", [&] {
    const int seeds = fast ? 5 : 25;
    for (int n = 1; n <= 4; ++n) {
      for (int s = 0; s < seeds; ++s) {
        const HypercubeInstance instance(n, static_cast<std::uint64_t>(s));
        const auto fast_gs = ground_state(instance);
        const auto slow_gs = brute_force_ground_state(instance);
        if (fast_gs.m_n != slow_gs.m_n) {
          return detail::describe("energies differ at n=", n, " seed=", s);
        }
        const auto violation = path_violation(instance, fast_gs.path);
        if (!violation.empty()) {
          return detail::describe("invalid path at n=", n, " seed=", s, ": ", violation);
        }
      }
    }
    return std::string{};
  }));

  results.push_back(detail::run_check("directed overlap envelopes", [&] {
    const int n_max = fast ? 6 : 7;
    for (int n = 1; n <= n_max; ++n) {
      for (int k = 0; k <= n; ++k) {
        const BigInt count = directed_overlap_count(n, k);
        const BigInt rest = factorial(static_cast<unsigned>(n - k));
        if (count > rest * binomial(static_cast<unsigned>(n), static_cast<unsigned>(k))) {
          return detail::describe("binomial envelope fails at n=", n, " k=", k);
        }
        if (std::pow(k, 4) <= n && count > 2 * rest * (k + 1)) {
          return detail::describe("(k+1) envelope fails at n=", n, " k=", k);
        }
      }
    }
    return std::string{};
  }));

  results.push_back(detail::run_check("length weights are normalized", [] {
    const auto dist = length_weight_distribution(40, 120);
    const double total = dist.total();
    if (total > 1.0 + 1e-12 || total + dist.tail_bound < 1.0 - 1e-12) {
      return detail::describe("mass ", total, " tail ", dist.tail_bound);
    }
    return std::string{};
  }));

  return results;
}

}  // namespace polylab
