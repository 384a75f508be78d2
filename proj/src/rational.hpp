// SPDX-License-Identifier: MIT
//
// Exact arithmetic helpers: arbitrary-precision integers and rationals,
// decimal <-> rational conversion, binomial coefficients and power-of-two
// tables used throughout the attribution engine.

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace facta {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// 2^k as an exact integer.
inline BigInt pow2(std::size_t k) {
  BigInt one = 1;
  return one << k;
}

/// Binomial coefficient C(n, k), exact; 0 when k > n.
inline BigInt binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  BigInt r = 1;
  for (std::size_t i = 1; i <= k; ++i) {
    r *= static_cast<unsigned long>(n - k + i);
    r /= static_cast<unsigned long>(i);
  }
  return r;
}

/// Row n of Pascal's triangle: [C(n,0), ..., C(n,n)].
inline std::vector<BigInt> binomial_row(std::size_t n) {
  std::vector<BigInt> row(n + 1);
  row[0] = 1;
  for (std::size_t k = 1; k <= n; ++k) row[k] = row[k - 1] * (n - k + 1) / k;
  return row;
}

/// Parses a plain decimal string ("377", "-12.5", "0.25") into an exact
/// rational. Returns std::nullopt on malformed input (exponents, stray
/// characters, empty digit sequences).
std::optional<Rational> parse_decimal(std::string_view text);

/// Renders an exact rational as a decimal string with no precision loss.
/// Works whenever the reduced denominator is of the form 2^a * 5^b (always the
/// case for values that entered the system as decimal strings and were
/// combined with +, -, *); falls back to "num/den" otherwise.
std::string format_exact(const Rational& value);

/// "num/den" (or just "num" when den == 1).
std::string format_fraction(const Rational& value);

/// Nearest-double rendering (for the *_float convenience columns).
double to_double(const Rational& value);

}  // namespace facta
