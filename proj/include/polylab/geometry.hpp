#pragma once

// Coarse-grained geometry of optimal polymers.
//
// The cube is cut by K equidistant hyperplanes; a_i is the fraction of the
// polymer's length spent in slab i and d_i the normalized Hamming distance
// it covers there. Everything here is closed form plus the F-function whose
// maximum (=1) is attained exactly at d.

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "polylab/constants.hpp"

namespace polylab {

/// Raised when an argument of phi(y) = y^y is negative.
class GeometryDomainError : public std::domain_error {
 public:
  GeometryDomainError(const std::string& what, int coordinate)
      : std::domain_error(what), coordinate_(coordinate) {}

  /// 1-based slab index whose argument left the domain.
  int coordinate() const { return coordinate_; }

 private:
  int coordinate_;
};

struct CoarseGraining {
  int K = 0;
  double E = kGroundEnergy;
  std::vector<double> a;       // slab i = 1..K stored at [i-1]
  std::vector<double> abar;    // cumulative, i = 0..K stored at [i]
  std::vector<double> aunder;  // 1 - abar, i = 0..K stored at [i]
  std::vector<double> d;
  std::vector<double> ef;
  std::vector<double> eb;
};

/// sinh(alpha E) cosh((1 - alpha) E): typical normalized depth after a
/// fraction alpha of the polymer.
inline double depth_of_alpha(double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("alpha must lie in [0, 1]");
  }
  return std::sinh(alpha * kGroundEnergy) * std::cosh((1.0 - alpha) * kGroundEnergy);
}

inline CoarseGraining solve_coarse_graining(int K) {
  if (K < 1) {
    throw std::invalid_argument("number of scales K must be >= 1");
  }
  CoarseGraining cg;
  cg.K = K;
  const double E = cg.E;
  cg.abar.resize(static_cast<std::size_t>(K) + 1);
  for (int i = 0; i <= K; ++i) {
    cg.abar[static_cast<std::size_t>(i)] =
        0.5 * (1.0 + std::asinh(2.0 * i / K - 1.0) / E);
  }
  cg.abar.front() = 0.0;
  cg.abar.back() = 1.0;
  for (int i = 0; i <= K; ++i) {
    cg.aunder.push_back(1.0 - cg.abar[static_cast<std::size_t>(i)]);
  }
  for (int i = 1; i <= K; ++i) {
    const double ai = cg.abar[static_cast<std::size_t>(i)] - cg.abar[static_cast<std::size_t>(i - 1)];
    const double di = std::sinh(ai * E) * std::cosh((1.0 - ai) * E);
    cg.a.push_back(ai);
    cg.d.push_back(di);
    cg.ef.push_back(di / 2.0 + 1.0 / (2.0 * K));
    cg.eb.push_back(di / 2.0 - 1.0 / (2.0 * K));
  }
  return cg;
}

namespace detail {

// y log y with the continuous extension 0 at y = 0; float noise just below
// zero is clamped.
inline double log_phi(double y, int coordinate) {
  if (y < 0.0) {
    if (y >= -1e-14) {
      return 0.0;
    }
    throw GeometryDomainError("phi argument " + std::to_string(y) + " is negative in slab " +
                                  std::to_string(coordinate),
                              coordinate);
  }
  return y == 0.0 ? 0.0 : y * std::log(y);
}

}  // namespace detail

inline double phi(double y) { return std::exp(detail::log_phi(y, 0)); }

/// Admissible interval for the depth of slab j (all phi arguments >= 0).
inline std::array<double, 2> slab_domain(const CoarseGraining& cg, int j) {
  const double K = cg.K;
  const double lo = 1.0 / K;
  const double hi = std::min(2.0 * (j - 1) / K + 1.0 / K, 2.0 * (1.0 - (j - 1) / K) - 1.0 / K);
  return {lo, hi};
}

inline double log_g_factor(const CoarseGraining& cg, int j, double x) {
  if (j < 1 || j > cg.K) {
    throw std::invalid_argument("slab index out of range");
  }
  const double K = cg.K;
  const double aj = cg.a[static_cast<std::size_t>(j - 1)];
  const double prev = (j - 1) / K;
  const double half = x / 2.0;
  const double unit = 1.0 / (2.0 * K);
  const double numerator = x * std::log(std::sinh(aj * cg.E)) + (1.0 - x) * std::log(std::cosh(aj * cg.E)) +
                           detail::log_phi(prev, j) + detail::log_phi(1.0 - prev, j);
  const double denominator = detail::log_phi(half - unit, j) + detail::log_phi(prev - half + unit, j) +
                             detail::log_phi(half + unit, j) + detail::log_phi(1.0 - prev - half - unit, j);
  return numerator - denominator;
}

/// Per-slab factor g_{j,K}(x) of the F-function.
inline double g_factor(const CoarseGraining& cg, int j, double x) {
  return std::exp(log_g_factor(cg, j, x));
}

/// Closed-form maximizer of g_{j,K} for an interior slab.
inline double optimal_d_closed_form(const CoarseGraining& cg, int j) {
  if (j <= 1 || j >= cg.K) {
    throw std::invalid_argument("boundary slabs are forced to depth 1/K; closed form needs 2 <= j <= K-1");
  }
  const double K = cg.K;
  const double s2 = std::pow(std::sinh(cg.a[static_cast<std::size_t>(j - 1)] * cg.E), 2);
  const double bracket = (2.0 * j - 1.0) / (2.0 * K) - j * (j - 1.0) / (K * K);
  return -s2 + std::sqrt(s2 * s2 + 4.0 * s2 * bracket + 1.0 / (K * K));
}

/// prod_{j <= i} g_{j,K}(d_j)
inline double evolution_product(const CoarseGraining& cg, int i) {
  if (i < 1 || i > cg.K) {
    throw std::invalid_argument("evolution index must lie in [1, K]");
  }
  double log_sum = 0.0;
  for (int j = 1; j <= i; ++j) {
    log_sum += log_g_factor(cg, j, cg.d[static_cast<std::size_t>(j - 1)]);
  }
  return std::exp(log_sum);
}

/// [sinh(abar_i E)/(i/K)]^{i/K} [cosh(abar_i E)/(1 - i/K)]^{1 - i/K}
inline double evolution_closed_form(const CoarseGraining& cg, int i) {
  const double t = static_cast<double>(i) / cg.K;
  const double ab = cg.abar[static_cast<std::size_t>(i)];
  double log_value = t * (std::log(std::sinh(ab * cg.E)) - std::log(t));
  if (i < cg.K) {
    log_value += (1.0 - t) * (std::log(std::cosh(ab * cg.E)) - std::log(1.0 - t));
  }
  return std::exp(log_value);
}

inline double f_function(const CoarseGraining& cg, const std::vector<double>& dvec) {
  if (static_cast<int>(dvec.size()) != cg.K) {
    throw std::invalid_argument("depth vector must have K entries");
  }
  double log_sum = 0.0;
  for (int j = 1; j <= cg.K; ++j) {
    log_sum += log_g_factor(cg, j, dvec[static_cast<std::size_t>(j - 1)]);
  }
  return std::exp(log_sum);
}

/// Residuals of the four equivalent slab identities at d = d_j: the depth
/// split into effective steps is reproduced by products of sinh/cosh of
/// abar_{j-1}, a_j and aunder_j.
inline std::array<double, 4> slab_identity_residuals(const CoarseGraining& cg, int j) {
  const double K = cg.K;
  const double E = cg.E;
  const double d = cg.d[static_cast<std::size_t>(j - 1)];
  const double before = cg.abar[static_cast<std::size_t>(j - 1)] * E;
  const double inside = cg.a[static_cast<std::size_t>(j - 1)] * E;
  const double after = cg.aunder[static_cast<std::size_t>(j)] * E;
  using std::cosh;
  using std::sinh;
  return {
      d / 2 - 1 / (2 * K) - sinh(before) * sinh(inside) * sinh(after),
      1 - j / K - d / 2 + 1 / (2 * K) - cosh(before) * cosh(inside) * sinh(after),
      d / 2 + 1 / (2 * K) - cosh(before) * sinh(inside) * cosh(after),
      j / K - d / 2 - 1 / (2 * K) - sinh(before) * cosh(inside) * cosh(after),
  };
}

/// max_i |d_i - a_i L| K^2, the measured constant in d_i = a_i L + O(1/K^2).
inline double linearization_deviation(const CoarseGraining& cg) {
  double worst = 0.0;
  for (std::size_t i = 0; i < cg.d.size(); ++i) {
    worst = std::max(worst, std::fabs(cg.d[i] - cg.a[i] * kOptimalLength));
  }
  return worst * cg.K * cg.K;
}

struct OptimalProfile {
  int K = 0;
  int m = 0;
  std::vector<double> d_opt;
  double L_opt = 0.0;
};

/// Depth profile with the first and last m slabs made fully directed.
inline OptimalProfile build_optimal_profile(int K, int m = 2) {
  if (m < 0 || 2 * m >= K) {
    throw std::invalid_argument("profile needs 0 <= m and 2m < K (K=" + std::to_string(K) +
                                ", m=" + std::to_string(m) + ")");
  }
  const auto cg = solve_coarse_graining(K);
  OptimalProfile profile;
  profile.K = K;
  profile.m = m;
  profile.d_opt = cg.d;
  for (int i = 0; i < m; ++i) {
    profile.d_opt[static_cast<std::size_t>(i)] = 1.0 / K;
    profile.d_opt[static_cast<std::size_t>(K - 1 - i)] = 1.0 / K;
  }
  for (double v : profile.d_opt) {
    profile.L_opt += v;
  }
  return profile;
}

inline double theta_hat(double x, double L_opt) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw std::invalid_argument("theta_hat needs x in [0, 1]");
  }
  const double y = kGroundEnergy * (1.0 - x);
  const double exponent = std::max(1.0 / L_opt - x, (1.0 - x) / 4.0);
  return std::pow(4.0, 1.0 - x) / std::pow(2.0 - x, 2.0 - x) * std::pow(std::tanh(y), exponent) *
         std::pow(std::cosh(y), 1.0 / L_opt);
}

namespace detail {

inline double log_overlap_prefactor(double x) {
  return (1.0 - x) * std::log(4.0) - (2.0 - x) * std::log(2.0 - x);
}

// u log sinh(E u)-style products with the 0 * log 0 = 0 convention.
inline double weighted_log(double weight, double value) {
  if (weight == 0.0) {
    return 0.0;
  }
  return weight * std::log(value);
}

}  // namespace detail

inline double log_g1(double x) {
  const double y = kGroundEnergy * (1.0 - x);
  return detail::log_overlap_prefactor(x) + detail::weighted_log(1.0 / 1.25 - x, std::sinh(y)) +
         detail::weighted_log(x, std::cosh(y));
}

inline double log_g2(double x) {
  const double y = kGroundEnergy * (1.0 - x);
  return detail::log_overlap_prefactor(x) + detail::weighted_log((1.0 - x) / 4.0, std::sinh(y)) +
         detail::weighted_log(1.0 / 1.24 - (1.0 - x) / 4.0, std::cosh(y));
}

inline double g1(double x) { return std::exp(log_g1(x)); }
inline double g2(double x) { return std::exp(log_g2(x)); }

struct ClaimResult {
  std::string name;
  bool passed = false;
  double measured = 0.0;
};

struct ScalarClaimsReport {
  std::vector<ClaimResult> items;

  bool all_passed() const {
    for (const auto& item : items) {
      if (!item.passed) {
        return false;
      }
    }
    return true;
  }
};

/// Intervals on which log-convexity of g1 and g2 is checked.
struct ConvexityIntervals {
  double g1_lo = 0.12;
  double g1_hi = 0.73;
  double g2_lo = 0.71;
  double g2_hi = 1.0;
};

/// Smallest second central difference of f on [lo, hi] with spacing h.
template <class Fn>
double min_second_difference(Fn&& f, double lo, double hi, double h) {
  double worst = std::numeric_limits<double>::infinity();
  const auto steps = static_cast<long>(std::floor((hi - lo) / h + 1e-9));
  for (long k = 1; k < steps; ++k) {
    const double x = lo + k * h;
    worst = std::min(worst, (f(x + h) - 2.0 * f(x) + f(x - h)) / (h * h));
  }
  return worst;
}

inline ScalarClaimsReport verify_scalar_claims(double grid_step, const ConvexityIntervals& iv = {}) {
  if (!(grid_step > 0.0 && grid_step <= 1e-3)) {
    throw std::invalid_argument("grid_step must lie in (0, 1e-3]");
  }
  ScalarClaimsReport report;
  const auto points = static_cast<long>(std::llround(1.0 / grid_step));

  double sup = 0.0;
  double worst_decay = -std::numeric_limits<double>::infinity();
  for (double L_opt : {1.24, 1.25}) {
    for (long k = 0; k <= points; ++k) {
      const double x = std::min(1.0, k * grid_step);
      const double value = theta_hat(x, L_opt);
      sup = std::max(sup, value);
      if (x > 0.0 && x <= 0.2 + 1e-12) {
        worst_decay = std::max(worst_decay, std::log(value) + x / 100.0);
      }
    }
  }
  report.items.push_back({"theta_hat sup <= 1", sup <= 1.0 + 1e-9, sup});
  report.items.push_back({"theta_hat <= exp(-x/100) on (0, 0.2]", worst_decay <= 0.0, worst_decay});

  const double c1 = min_second_difference(log_g1, iv.g1_lo, iv.g1_hi, grid_step);
  report.items.push_back({"log g1 convex on [" + std::to_string(iv.g1_lo) + ", " + std::to_string(iv.g1_hi) + "]",
                          c1 >= -1e-6, c1});
  const double c2 = min_second_difference(log_g2, iv.g2_lo, iv.g2_hi, grid_step);
  report.items.push_back({"log g2 convex on [" + std::to_string(iv.g2_lo) + ", " + std::to_string(iv.g2_hi) + "]",
                          c2 >= -1e-6, c2});

  const double worst_boundary = std::max({g1(0.12), g1(0.73), g2(0.71)});
  const bool boundary_ok = worst_boundary <= 1.0 && std::fabs(g2(1.0) - 1.0) <= 1e-15;
  report.items.push_back({"g1(0.12), g1(0.73), g2(0.71) <= 1 and g2(1) = 1", boundary_ok, worst_boundary});
  return report;
}

}  // namespace polylab
