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

#ifndef IGFAIR_RATIONAL_H_
#define IGFAIR_RATIONAL_H_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

namespace igfair {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

// Base exception for all input and contract errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A decimal literal split into an integer mantissa and a count of fractional
// digits, so that value == mantissa / 10^decimals exactly.
struct Decimal {
  std::int64_t mantissa = 0;
  int decimals = 0;
};

// Parses "12", "-3.50", "0.125", "+7." exactly. Exponent notation is
// rejected. Throws Error on anything that is not a plain decimal literal.
Decimal ParseDecimal(std::string_view text);

// Parses a decimal literal into an exact rational.
Rational ParseRational(std::string_view text);

std::int64_t Pow10(int exponent);

double ToDouble(const Rational& value);

// "num/den" or "num" when the denominator is one.
std::string ToFractionString(const Rational& value);

// Exact decimal rendering for values whose reduced denominator divides a
// power of ten; otherwise rounds to `max_digits` fractional digits.
std::string ToDecimalString(const Rational& value, int max_digits = 12);

// floor(value) as an integer.
BigInt Floor(const Rational& value);

}  // namespace igfair

#endif  // IGFAIR_RATIONAL_H_
