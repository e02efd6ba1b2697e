#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace polylab {

using BigInt = boost::multiprecision::cpp_int;

/// Natural log of a non-negative exact integer without overflowing a double.
///
/// Uses the bit length plus the leading 64-bit word as mantissa, so the
/// result carries ~1e-16 relative error no matter how large the value is.
/// Returns -inf for zero.
inline double log_of(const BigInt& value) {
  if (value.sign() <= 0) {
    return -std::numeric_limits<double>::infinity();
  }
  const auto top_bit = boost::multiprecision::msb(value);
  if (top_bit < 64) {
    return std::log(static_cast<double>(value.convert_to<std::uint64_t>()));
  }
  const auto shift = top_bit - 63;
  const auto mantissa = static_cast<std::uint64_t>(value >> shift);
  return std::log(static_cast<double>(mantissa)) +
         static_cast<double>(shift) * std::numbers::ln2;
}

/// Quotient num / den as a double, correct to ~1 ulp for any magnitudes.
inline double ratio_of(const BigInt& num, const BigInt& den) {
  if (num.sign() == 0) {
    return 0.0;
  }
  const long long num_bits = static_cast<long long>(boost::multiprecision::msb(abs(num)));
  const long long den_bits = static_cast<long long>(boost::multiprecision::msb(den));
  const long long shift = std::max(0LL, 64 + den_bits - num_bits);
  const BigInt quotient = (num << shift) / den;
  return std::ldexp(quotient.convert_to<double>(), static_cast<int>(-shift));
}

/// log(num / den) for positive exact integers; finite even when both overflow.
inline double log_ratio(const BigInt& num, const BigInt& den) {
  if (num.sign() <= 0) {
    return -std::numeric_limits<double>::infinity();
  }
  const long long num_bits = static_cast<long long>(boost::multiprecision::msb(num));
  const long long den_bits = static_cast<long long>(boost::multiprecision::msb(den));
  const long long shift = std::max(0LL, 64 + den_bits - num_bits);
  const BigInt quotient = (num << shift) / den;
  return log_of(quotient) - static_cast<double>(shift) * std::numbers::ln2;
}

inline std::string to_decimal(const BigInt& value) { return value.str(); }

inline BigInt binomial(unsigned n, unsigned k) {
  if (k > n) {
    return 0;
  }
  k = std::min(k, n - k);
  BigInt result = 1;
  for (unsigned i = 1; i <= k; ++i) {
    result *= n - k + i;
    result /= i;
  }
  return result;
}

inline BigInt factorial(unsigned n) {
  BigInt result = 1;
  for (unsigned i = 2; i <= n; ++i) {
    result *= i;
  }
  return result;
}

}  // namespace polylab
