#pragma once

#include <array>
#include <cmath>
#include <queue>
#include <stdexcept>
#include <string>
#include <vector>

namespace polylab {

class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  int intervals = 0;
};

namespace detail {

// 15-point Kronrod extension of the 7-point Gauss rule on [-1, 1].
inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double lo, hi, value, error;
  bool operator<(const Segment& other) const { return error < other.error; }
};

template <class Fn>
Segment kronrod_segment(Fn& f, double lo, double hi) {
  const double center = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  const double fc = f(center);
  double kronrod = fc * kKronrodWeights[7];
  double gauss = fc * kGaussWeights[3];
  for (int i = 0; i < 7; ++i) {
    const double dx = half * kKronrodNodes[static_cast<std::size_t>(i)];
    const double pair = f(center - dx) + f(center + dx);
    kronrod += kKronrodWeights[static_cast<std::size_t>(i)] * pair;
    if (i % 2 == 1) {
      gauss += kGaussWeights[static_cast<std::size_t>(i / 2)] * pair;
    }
  }
  return {lo, hi, kronrod * half, std::fabs((kronrod - gauss) * half)};
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod (7/15) integration of f over [lo, hi].
/// Bisects the worst segment until the summed error estimate drops below
/// max(rel_tol |value|, abs_floor).
template <class Fn>
QuadratureResult integrate(Fn&& f, double lo, double hi, double rel_tol = 1e-10,
                           double abs_floor = 1e-300, int max_segments = 4000) {
  std::priority_queue<detail::Segment> heap;
  heap.push(detail::kronrod_segment(f, lo, hi));
  double value = heap.top().value;
  double error = heap.top().error;
  int segments = 1;
  while (error > std::max(rel_tol * std::fabs(value), abs_floor)) {
    if (segments >= max_segments) {
      throw QuadratureError("adaptive quadrature did not converge (error estimate " +
                            std::to_string(error) + ", value " + std::to_string(value) + ")");
    }
    const auto worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.lo + worst.hi);
    const auto left = detail::kronrod_segment(f, worst.lo, mid);
    const auto right = detail::kronrod_segment(f, mid, worst.hi);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++segments;
  }
  // Re-sum to shed the drift of incremental updates.
  value = 0.0;
  error = 0.0;
  while (!heap.empty()) {
    value += heap.top().value;
    error += heap.top().error;
    heap.pop();
  }
  return {value, error, segments};
}

}  // namespace polylab
