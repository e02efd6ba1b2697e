#pragma once

// Exact walk counts on the n-hypercube and the analysis built on them.
//
// M(n, l, d) counts walks of length l (loops allowed) between two vertices
// at Hamming distance d. The closed form is an alternating sum whose terms
// dwarf the result, so it is evaluated in exact integers and divided by
// 2^n once at the end.

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "polylab/bigint.hpp"
#include "polylab/constants.hpp"

namespace polylab {

namespace detail {

inline void check_count_args(int n, int l, int d) {
  if (n < 1) {
    throw std::invalid_argument("dimension n must be positive, got " + std::to_string(n));
  }
  if (l < 0) {
    throw std::invalid_argument("walk length l must be non-negative, got " + std::to_string(l));
  }
  if (d < 0 || d > n) {
    throw std::invalid_argument("Hamming distance d must lie in [0, n], got d=" +
                                std::to_string(d) + " n=" + std::to_string(n));
  }
}

// Coefficient of (n - 2i)^l in the closed form, before the 2^-n factor:
//   c_i = sum_{j <= min(i, d)} C(d, j) C(n - d, i - j) (-1)^j
inline std::vector<BigInt> stanley_coefficients(int n, int d) {
  std::vector<BigInt> coeff(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) {
    BigInt c = 0;
    for (int j = 0; j <= std::min(i, d); ++j) {
      if (i - j > n - d) {
        continue;
      }
      BigInt term = binomial(static_cast<unsigned>(d), static_cast<unsigned>(j)) *
                    binomial(static_cast<unsigned>(n - d), static_cast<unsigned>(i - j));
      c += (j % 2 == 0) ? term : BigInt(-term);
    }
    coeff[static_cast<std::size_t>(i)] = std::move(c);
  }
  return coeff;
}

inline double log_factorial(int l) { return std::lgamma(static_cast<double>(l) + 1.0); }

}  // namespace detail

/// Exact number of length-l walks between vertices at Hamming distance d on
/// the n-hypercube.
inline BigInt stanley_count(int n, int l, int d) {
  detail::check_count_args(n, l, d);
  const auto coeff = detail::stanley_coefficients(n, d);
  BigInt sum = 0;
  for (int i = 0; i <= n; ++i) {
    // pow(0, 0) == 1 in boost, which is the convention needed for l == 0.
    sum += coeff[static_cast<std::size_t>(i)] * boost::multiprecision::pow(BigInt(n - 2 * i), static_cast<unsigned>(l));
  }
  const BigInt scale = BigInt(1) << n;
  if (sum % scale != 0 || sum < 0) {
    throw std::logic_error("closed-form walk count is not a non-negative multiple of 2^n");
  }
  return sum / scale;
}

/// Counts for l = 0..l_max at fixed (n, d), sharing the running powers.
inline std::vector<BigInt> stanley_row(int n, int d, int l_max) {
  detail::check_count_args(n, l_max, d);
  const auto coeff = detail::stanley_coefficients(n, d);
  std::vector<BigInt> powers(coeff.size(), BigInt(1));
  std::vector<BigInt> row;
  row.reserve(static_cast<std::size_t>(l_max) + 1);
  for (int l = 0; l <= l_max; ++l) {
    BigInt sum = 0;
    for (std::size_t i = 0; i < coeff.size(); ++i) {
      sum += coeff[i] * powers[i];
      powers[i] *= n - 2 * static_cast<int>(i);
    }
    row.push_back(sum >> n);
  }
  return row;
}

/// Immutable table of M(n, l, d) for all l <= l_max and 0 <= d <= n.
class PathCountTable {
 public:
  PathCountTable(int n, int l_max) : n_(n), l_max_(l_max) {
    detail::check_count_args(n, l_max, 0);
    for (int d = 0; d <= n; ++d) {
      auto row = stanley_row(n, d, l_max);
      for (int l = 0; l <= l_max; ++l) {
        counts_.emplace(std::pair{l, d}, std::move(row[static_cast<std::size_t>(l)]));
      }
    }
  }

  int n() const { return n_; }
  int l_max() const { return l_max_; }

  const BigInt& at(int l, int d) const {
    const auto it = counts_.find({l, d});
    if (it == counts_.end()) {
      throw std::out_of_range("no table cell for l=" + std::to_string(l) + " d=" + std::to_string(d));
    }
    return it->second;
  }

  const std::map<std::pair<int, int>, BigInt>& counts() const { return counts_; }

 private:
  int n_;
  int l_max_;
  std::map<std::pair<int, int>, BigInt> counts_;
};

/// Independent oracle: dynamic programming over vertex occupancy vectors.
/// Walks start at vertex 0 and end at the vertex with the d lowest bits set.
inline BigInt brute_force_walk_count(int n, int l, int d) {
  detail::check_count_args(n, l, d);
  if (n > 6 || l > 12) {
    throw std::invalid_argument("brute-force walk count is limited to n <= 6, l <= 12");
  }
  const std::uint32_t vertices = 1u << n;
  std::vector<std::uint64_t> occupancy(vertices, 0), next(vertices, 0);
  occupancy[0] = 1;
  for (int step = 0; step < l; ++step) {
    std::fill(next.begin(), next.end(), 0);
    for (std::uint32_t v = 0; v < vertices; ++v) {
      if (occupancy[v] == 0) {
        continue;
      }
      for (int dim = 0; dim < n; ++dim) {
        next[v ^ (1u << dim)] += occupancy[v];
      }
    }
    occupancy.swap(next);
  }
  return BigInt(occupancy[(1u << d) - 1]);
}

/// Bound on the Taylor remainder of sinh(x)^d cosh(x)^(n-d) beyond l_max.
///
/// Every coefficient M(n,l,d)/l! is at most n^l/l!, so the remainder is at
/// most the exponential-series tail of e^{n x}. Returns +inf when the
/// geometric majorant does not converge yet (n x >= l_max + 2).
inline double identity_remainder_bound(int n, double x, int l_max) {
  const double nx = static_cast<double>(n) * x;
  const double ratio = nx / (static_cast<double>(l_max) + 2.0);
  if (ratio >= 1.0) {
    return std::numeric_limits<double>::infinity();
  }
  const double log_first = (l_max + 1) * std::log(nx) - detail::log_factorial(l_max + 1);
  return std::exp(log_first) / (1.0 - ratio);
}

/// Smallest truncation length whose remainder bound is below tol.
inline int identity_truncation(int n, double x, double tol) {
  int l_max = 0;
  while (identity_remainder_bound(n, x, l_max) >= tol) {
    ++l_max;
  }
  return l_max;
}

/// |sum_{l <= l_max} M(n,l,d) x^l / l! - sinh(x)^d cosh(x)^(n-d)|
inline double identity_residual(int n, int d, double x, int l_max) {
  if (!(x > 0.0)) {
    throw std::invalid_argument("identity_residual needs x > 0");
  }
  const auto row = stanley_row(n, d, l_max);
  BigInt fact = 1;
  long double partial = 0.0L;
  for (int l = 0; l <= l_max; ++l) {
    if (l > 0) {
      fact *= l;
    }
    const auto& count = row[static_cast<std::size_t>(l)];
    if (count == 0) {
      continue;
    }
    partial += static_cast<long double>(ratio_of(count, fact)) *
               std::pow(static_cast<long double>(x), l);
  }
  const long double exact = std::pow(std::sinh(static_cast<long double>(x)), d) *
                            std::pow(std::cosh(static_cast<long double>(x)), n - d);
  return static_cast<double>(std::fabs(partial - exact));
}

/// log of sinh(x)^d cosh(x)^(n-d) l! / x^l.
inline double log_m_bound(int n, int l, int d, double x) {
  detail::check_count_args(n, l, d);
  if (!(x > 0.0)) {
    throw std::invalid_argument("m_bound needs x > 0");
  }
  return d * std::log(std::sinh(x)) + (n - d) * std::log(std::cosh(x)) + detail::log_factorial(l) -
         l * std::log(x);
}

/// Upper bound on M(n, l, d) valid for every x > 0.
inline double m_bound(int n, int l, int d, double x) {
  const double log_value = log_m_bound(n, l, d, x);
  if (log_value > std::log(std::numeric_limits<double>::max())) {
    throw std::overflow_error("m_bound exceeds double range (log value " + std::to_string(log_value) +
                              ")");
  }
  return std::exp(log_value);
}

/// Unique x >= 0 with x / tanh(x) = ratio, by bisection.
inline double solve_length_ratio(double ratio) {
  if (!(ratio >= 1.0)) {
    throw std::invalid_argument("x/tanh(x) takes values in [1, inf); ratio must be >= 1");
  }
  if (ratio == 1.0) {
    return 0.0;
  }
  const auto f = [ratio](double x) { return x / std::tanh(x) - ratio; };
  double lo = 1e-12;
  double hi = ratio + 1.0;
  for (int iter = 0; iter < 200 && hi - lo > 1e-15; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) {
      break;
    }
    (f(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

namespace detail {

// Rigorous bound on sum_{l > l_last} M(n,l) x^l / l! via the M-bound with a
// free parameter y > x: every term is at most sinh(y)^n (x/y)^l.
inline double weighted_tail_bound(int n, double x, int l_last) {
  double best = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= 400; ++k) {
    const double y = x * (1.0 + 0.05 * k);
    const double q = x / y;
    const double log_value = n * std::log(std::sinh(y)) + (l_last + 1) * std::log(q) - std::log1p(-q);
    best = std::min(best, log_value);
  }
  return std::exp(best);
}

}  // namespace detail

/// Normalized weights w_l = M(n,l) E^l / l! over polymer lengths.
struct LengthWeightDistribution {
  int n = 0;
  int l_max = 0;
  std::vector<double> weights;
  double tail_bound = 0.0;

  double total() const {
    long double sum = 0.0L;
    for (double w : weights) {
      sum += w;
    }
    return static_cast<double>(sum);
  }

  int argmax() const {
    int best = 0;
    for (int l = 1; l <= l_max; ++l) {
      if (weights[static_cast<std::size_t>(l)] > weights[static_cast<std::size_t>(best)]) {
        best = l;
      }
    }
    return best;
  }
};

inline LengthWeightDistribution length_weight_distribution(int n, int l_max) {
  if (n < 1) {
    throw std::invalid_argument("dimension n must be positive");
  }
  if (l_max < 3 * n) {
    throw std::invalid_argument("length_weight_distribution needs l_max >= 3n");
  }
  LengthWeightDistribution dist;
  dist.n = n;
  dist.l_max = l_max;
  dist.weights.assign(static_cast<std::size_t>(l_max) + 1, 0.0);
  const auto row = stanley_row(n, n, l_max);
  const double log_e = std::log(kGroundEnergy);
  BigInt fact = 1;
  for (int l = 0; l <= l_max; ++l) {
    if (l > 0) {
      fact *= l;
    }
    const auto& count = row[static_cast<std::size_t>(l)];
    if (count != 0) {
      dist.weights[static_cast<std::size_t>(l)] = std::exp(log_ratio(count, fact) + l * log_e);
    }
  }
  dist.tail_bound = detail::weighted_tail_bound(n, kGroundEnergy, l_max);
  return dist;
}

struct TailMass {
  double lower_tail = 0.0;
  double upper_tail = 0.0;
  /// Full sum sinh(E + eps^2)^n, for reference.
  double total = 0.0;
};

/// Mass of sum_l M(n,l) (E + eps^2)^l / l! outside the window
/// (L - a eps) n < l < (L + a eps) n.
inline TailMass concentration_tail_mass(int n, double eps, double a) {
  if (n < 1) {
    throw std::invalid_argument("dimension n must be positive");
  }
  if (!(eps > 0.0 && eps < 0.3)) {
    throw std::invalid_argument("eps must lie in (0, 0.3)");
  }
  if (!(a >= 0.0)) {
    throw std::invalid_argument("a must be non-negative");
  }
  const double x = kGroundEnergy + eps * eps;
  const double log_x = std::log(x);
  const double lower_edge = (kOptimalLength - a * eps) * n;
  const double upper_edge = (kOptimalLength + a * eps) * n;

  TailMass mass;
  mass.total = std::pow(std::sinh(x), n);

  // Grow the row in chunks until the truncation rule fires.
  int l_max = 4 * n;
  for (;;) {
    const auto row = stanley_row(n, n, l_max);
    long double lower = 0.0L, upper = 0.0L, running = 0.0L;
    double previous = 0.0;
    BigInt fact = 1;
    int stop = -1;
    for (int l = 0; l <= l_max; ++l) {
      if (l > 0) {
        fact *= l;
      }
      const auto& count = row[static_cast<std::size_t>(l)];
      if (count == 0) {
        continue;
      }
      const double term = std::exp(log_ratio(count, fact) + l * log_x);
      running += term;
      if (l <= lower_edge) {
        lower += term;
      }
      if (l >= upper_edge) {
        upper += term;
      }
      const bool decaying = term < previous;
      previous = term;
      if (decaying && l > upper_edge && term < 1e-18 * static_cast<double>(running)) {
        stop = l;
        break;
      }
    }
    if (stop >= 0) {
      mass.lower_tail = static_cast<double>(lower);
      mass.upper_tail = static_cast<double>(upper) + detail::weighted_tail_bound(n, x, stop);
      return mass;
    }
    l_max *= 2;
  }
}

}  // namespace polylab
