// SPDX-License-Identifier: MIT

#include "rational.hpp"

#include <cctype>

namespace facta {

std::optional<Rational> parse_decimal(std::string_view text) {
  if (text.empty()) return std::nullopt;
  std::size_t i = 0;
  bool negative = false;
  if (text[i] == '+' || text[i] == '-') {
    negative = (text[i] == '-');
    ++i;
  }
  BigInt mantissa = 0;
  std::size_t intDigits = 0, fracDigits = 0;
  while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
    mantissa = mantissa * 10 + (text[i] - '0');
    ++intDigits;
    ++i;
  }
  if (i < text.size() && text[i] == '.') {
    ++i;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
      mantissa = mantissa * 10 + (text[i] - '0');
      ++fracDigits;
      ++i;
    }
  }
  if (i != text.size()) return std::nullopt;          // trailing junk / exponent
  if (intDigits + fracDigits == 0) return std::nullopt;  // no digits at all
  BigInt den = 1;
  for (std::size_t d = 0; d < fracDigits; ++d) den *= 10;
  if (negative) mantissa = -mantissa;
  return Rational(mantissa, den);
}

std::string format_exact(const Rational& value) {
  BigInt num = boost::multiprecision::numerator(value);
  BigInt den = boost::multiprecision::denominator(value);
  // Count the factors of 2 and 5 in the (already reduced) denominator.
  BigInt rest = den;
  std::size_t twos = 0, fives = 0;
  while (rest % 2 == 0) {
    rest /= 2;
    ++twos;
  }
  while (rest % 5 == 0) {
    rest /= 5;
    ++fives;
  }
  if (rest != 1) return format_fraction(value);  // not a finite decimal
  std::size_t shift = twos > fives ? twos : fives;
  // num/den == (num * 10^shift / den) / 10^shift, and den | 10^shift.
  BigInt scale = 1;
  for (std::size_t d = 0; d < shift; ++d) scale *= 10;
  BigInt scaled = num * scale / den;
  bool negative = scaled < 0;
  if (negative) scaled = -scaled;
  std::string digits = scaled.str();
  std::string out;
  if (shift == 0) {
    out = digits;
  } else {
    if (digits.size() <= shift) digits.insert(0, shift - digits.size() + 1, '0');
    out = digits.substr(0, digits.size() - shift) + "." + digits.substr(digits.size() - shift);
    // Trim trailing zeros of the fractional part (keep at least one digit).
    while (out.back() == '0') out.pop_back();
    if (out.back() == '.') out.pop_back();
  }
  return negative ? "-" + out : out;
}

std::string format_fraction(const Rational& value) {
  BigInt num = boost::multiprecision::numerator(value);
  BigInt den = boost::multiprecision::denominator(value);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

double to_double(const Rational& value) { return value.convert_to<double>(); }

}  // namespace facta
