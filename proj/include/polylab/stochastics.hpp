#pragma once

// Probability kernels for sums of standard exponentials: Erlang tails and the
// joint small-energy probability of two paths sharing k of their l edges.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "polylab/prf.hpp"
#include "polylab/quadrature.hpp"

namespace polylab {

namespace detail {

// sum_{k >= 1} x^k / ((l+1)(l+2)...(l+k)); converges for every x.
inline double erlang_series_excess(int l, double x) {
  double term = 1.0;
  double sum = 0.0;
  for (int k = 1; k < 100000; ++k) {
    term *= x / (l + k);
    sum += term;
    if (term < 1e-17 * sum) {
      break;
    }
  }
  return sum;
}

inline double log_erlang_leading(int l, double x) {
  return -x + l * std::log(x) - std::lgamma(static_cast<double>(l) + 1.0);
}

}  // namespace detail

/// P(X_l <= x) for X_l a sum of l independent standard exponentials.
inline double erlang_cdf(int l, double x) {
  if (l < 1) {
    throw std::invalid_argument("erlang_cdf needs l >= 1");
  }
  if (!(x >= 0.0)) {
    throw std::invalid_argument("erlang_cdf needs x >= 0");
  }
  if (x == 0.0) {
    return 0.0;
  }
  if (x < l + 1.0) {
    // P = e^-x x^l / l! * (1 + excess)
    const double value = std::exp(detail::log_erlang_leading(l, x)) * (1.0 + detail::erlang_series_excess(l, x));
    return std::min(value, 1.0);
  }
  // Complement: Q = e^-x sum_{j<l} x^j / j!
  double term = std::exp(-x);
  double upper = term;
  for (int j = 1; j < l; ++j) {
    term *= x / j;
    upper += term;
  }
  return std::clamp(1.0 - upper, 0.0, 1.0);
}

/// K(x, l) in P(X_l <= x) = (1 + K) e^-x x^l / l!.
inline double erlang_tail_ratio(int l, double x) {
  if (l < 1) {
    throw std::invalid_argument("erlang_tail_ratio needs l >= 1");
  }
  if (!(x > 0.0)) {
    throw std::invalid_argument("erlang_tail_ratio needs x > 0");
  }
  return detail::erlang_series_excess(l, x);
}

/// Overlap penalty {4(1-g)}^{1-g} / (2-g)^{2-g}, with 0^0 = 1.
inline double overlap_g(double gamma) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) {
    throw std::invalid_argument("overlap_g needs gamma in [0, 1]");
  }
  const double shared = 1.0 - gamma;
  const double log_num = shared == 0.0 ? 0.0 : shared * std::log(4.0 * shared);
  return std::exp(log_num - (2.0 - gamma) * std::log(2.0 - gamma));
}

/// Two length-l paths sharing exactly k edges, both asked to have energy <= x.
struct OverlapSpec {
  int l = 1;
  int k = 0;
  double x = 1.0;

  void validate() const {
    if (l < 1 || k < 0 || k > l) {
      throw std::invalid_argument("overlap spec needs l >= 1 and 0 <= k <= l (l=" + std::to_string(l) +
                                  ", k=" + std::to_string(k) + ")");
    }
    if (!(x > 0.0)) {
      throw std::invalid_argument("overlap spec needs x > 0");
    }
  }
};

namespace detail {

// Density of X_k at t (k >= 1).
inline double erlang_density(int k, double t) {
  if (t <= 0.0) {
    return k == 1 ? 1.0 : 0.0;
  }
  return std::exp((k - 1) * std::log(t) - t - std::lgamma(static_cast<double>(k)));
}

}  // namespace detail

/// P(X_l <= x, X'_l <= x) by quadrature for every 0 <= k <= l: conditions on
/// the shared trunk when k >= 1, squares the integrated Erlang density when
/// k = 0.
inline double overlap_probability_quadrature(const OverlapSpec& spec) {
  spec.validate();
  const int l = spec.l;
  const int k = spec.k;
  const double x = spec.x;
  if (k == 0) {
    const double p = integrate([&](double t) { return detail::erlang_density(l, t); }, 0.0, x).value;
    return p * p;
  }
  const auto density_term = [&](double t) {
    if (t <= 0.0 || t > x) {
      return 0.0;
    }
    const double p = k == l ? 1.0 : erlang_cdf(l - k, x - t);
    return p * p * detail::erlang_density(k, t);
  };
  if (k == 1) {
    // t = x u^2
    const auto substituted = [&](double u) { return density_term(x * u * u) * 2.0 * x * u; };
    return integrate(substituted, 0.0, 1.0).value;
  }
  return integrate(density_term, 0.0, x).value;
}

/// P(X_l <= x, X'_l <= x) for two sums sharing k summands; closed forms at
/// k = 0 (independence) and k = l (identical sums), quadrature otherwise.
inline double overlap_probability_exact(const OverlapSpec& spec) {
  spec.validate();
  if (spec.k == 0) {
    const double p = erlang_cdf(spec.l, spec.x);
    return p * p;
  }
  if (spec.k == spec.l) {
    return erlang_cdf(spec.l, spec.x);
  }
  return overlap_probability_quadrature(spec);
}

/// Leading small-x form x^{2l-k} / ((l-k)! l!) g(k/l)^l.
inline double overlap_probability_leading(const OverlapSpec& spec) {
  spec.validate();
  if (spec.k < 1 || spec.k > spec.l - 1) {
    throw std::invalid_argument("leading form needs 1 <= k <= l-1");
  }
  const int l = spec.l;
  const int k = spec.k;
  const double log_value = (2 * l - k) * std::log(spec.x) - std::lgamma(l - k + 1.0) - std::lgamma(l + 1.0) +
                           l * std::log(overlap_g(static_cast<double>(k) / l));
  return std::exp(log_value);
}

struct MonteCarloEstimate {
  double estimate = 0.0;
  double standard_error = 0.0;
  std::uint64_t hits = 0;
  std::uint64_t trials = 0;
};

/// Monte Carlo estimate of the overlap probability. Sample t draws its
/// exponentials from stream (seed, t, component): the trunk uses components
/// [0, k), the two completions [k, l) and [l, 2l - k).
inline MonteCarloEstimate overlap_probability_mc(const OverlapSpec& spec, std::uint64_t trials, std::uint64_t seed,
                                                 unsigned parallelism = 1) {
  spec.validate();
  if (trials < 10000) {
    throw std::invalid_argument("overlap Monte Carlo needs at least 10^4 trials");
  }
  const int l = spec.l;
  const int k = spec.k;
  const double x = spec.x;
  const auto count_range = [&](std::uint64_t begin, std::uint64_t end) {
    std::uint64_t hits = 0;
    for (std::uint64_t t = begin; t < end; ++t) {
      double trunk = 0.0;
      int c = 0;
      for (; c < k && trunk <= x; ++c) {
        trunk += exponential_from_bits(stream_bits(seed, t, static_cast<std::uint64_t>(c)));
      }
      if (trunk > x) {
        continue;
      }
      double first = trunk;
      for (c = k; c < l && first <= x; ++c) {
        first += exponential_from_bits(stream_bits(seed, t, static_cast<std::uint64_t>(c)));
      }
      if (first > x) {
        continue;
      }
      double second = trunk;
      for (c = l; c < 2 * l - k && second <= x; ++c) {
        second += exponential_from_bits(stream_bits(seed, t, static_cast<std::uint64_t>(c)));
      }
      hits += second <= x ? 1 : 0;
    }
    return hits;
  };

  parallelism = std::max(1u, parallelism);
  std::vector<std::uint64_t> partial(parallelism, 0);
  {
    std::vector<std::jthread> workers;
    for (unsigned w = 0; w < parallelism; ++w) {
      const std::uint64_t begin = trials * w / parallelism;
      const std::uint64_t end = trials * (w + 1) / parallelism;
      workers.emplace_back([&, w, begin, end] { partial[w] = count_range(begin, end); });
    }
  }
  MonteCarloEstimate result;
  result.trials = trials;
  for (auto h : partial) {
    result.hits += h;
  }
  const double n = static_cast<double>(trials);
  result.estimate = static_cast<double>(result.hits) / n;
  result.standard_error = std::sqrt(result.estimate * (1.0 - result.estimate) / n);
  return result;
}

struct ShiftCheck {
  bool holds = false;
  double ratio = 0.0;
};

/// P(a + b) <= C P(a) (1 + b/a)^{2l-k} with C = 10, P the overlap probability.
inline ShiftCheck shift_inequality_check(int l, int k, double a, double b, double constant = 10.0) {
  if (k < 1 || k > l) {
    throw std::invalid_argument("shift check needs 1 <= k <= l");
  }
  if (!(a > 0.0 && b > 0.0)) {
    throw std::invalid_argument("shift check needs a, b > 0");
  }
  const double shifted = overlap_probability_exact({l, k, a + b});
  const double base = overlap_probability_exact({l, k, a});
  const double envelope = base * std::pow(1.0 + b / a, 2 * l - k);
  ShiftCheck check;
  check.ratio = shifted / envelope;
  check.holds = check.ratio <= constant;
  return check;
}

}  // namespace polylab
