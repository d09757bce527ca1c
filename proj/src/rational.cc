// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "igfair/rational.h"

#include <cctype>
#include <limits>

namespace igfair {

Decimal ParseDecimal(std::string_view text) {
  auto fail = [&]() -> Decimal {
    throw Error("not a decimal literal: '" + std::string(text) + "'");
  };
  std::size_t pos = 0;
  while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  std::size_t end = text.size();
  while (end > pos && std::isspace(static_cast<unsigned char>(text[end - 1]))) --end;
  if (pos == end) return fail();

  bool negative = false;
  if (text[pos] == '+' || text[pos] == '-') {
    negative = text[pos] == '-';
    ++pos;
  }
  constexpr std::int64_t kLimit = std::numeric_limits<std::int64_t>::max() / 10;
  std::int64_t mantissa = 0;
  int decimals = 0;
  int digits = 0;
  bool seen_point = false;
  for (; pos < end; ++pos) {
    const char c = text[pos];
    if (c == '.') {
      if (seen_point) return fail();
      seen_point = true;
      continue;
    }
    if (!std::isdigit(static_cast<unsigned char>(c))) return fail();
    if (mantissa > kLimit) throw Error("decimal literal too long: '" + std::string(text) + "'");
    mantissa = mantissa * 10 + (c - '0');
    ++digits;
    if (seen_point) ++decimals;
  }
  if (digits == 0) return fail();
  // Trailing zeros after the point carry no information.
  while (decimals > 0 && mantissa % 10 == 0) {
    mantissa /= 10;
    --decimals;
  }
  if (decimals > 15) throw Error("too many fractional digits: '" + std::string(text) + "'");
  return {negative ? -mantissa : mantissa, decimals};
}

std::int64_t Pow10(int exponent) {
  std::int64_t p = 1;
  for (int e = 0; e < exponent; ++e) p *= 10;
  return p;
}

Rational ParseRational(std::string_view text) {
  const Decimal d = ParseDecimal(text);
  return Rational(d.mantissa, Pow10(d.decimals));
}

double ToDouble(const Rational& value) { return value.convert_to<double>(); }

std::string ToFractionString(const Rational& value) {
  const BigInt num = boost::multiprecision::numerator(value);
  const BigInt den = boost::multiprecision::denominator(value);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

BigInt Floor(const Rational& value) {
  const BigInt num = boost::multiprecision::numerator(value);
  const BigInt den = boost::multiprecision::denominator(value);
  BigInt q = num / den;  // truncates toward zero
  if (num < 0 && q * den != num) q -= 1;
  return q;
}

std::string ToDecimalString(const Rational& value, int max_digits) {
  const bool negative = value < 0;
  const Rational magnitude = negative ? Rational(-value) : value;
  BigInt den = boost::multiprecision::denominator(magnitude);
  int digits = 0;
  // Find the shortest exact expansion, if one exists within max_digits.
  BigInt scale = 1;
  while (digits < max_digits && (scale % den) != 0) {
    scale *= 10;
    ++digits;
  }
  const Rational scaled = magnitude * Rational(scale);
  BigInt units = Floor(scaled + Rational(1, 2));
  if ((scale % den) == 0) units = Floor(scaled);
  std::string body = units.str();
  if (digits > 0) {
    if (static_cast<int>(body.size()) <= digits) {
      body.insert(0, static_cast<std::size_t>(digits) + 1 - body.size(), '0');
    }
    body.insert(body.size() - digits, ".");
    while (body.back() == '0') body.pop_back();
    if (body.back() == '.') body.pop_back();
  }
  if (negative && body != "0") body.insert(0, "-");
  return body;
}

}  // namespace igfair
