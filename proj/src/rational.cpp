// Copyright 2026 The Blowup Authors
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

#include "blowup/rational.hpp"

#include <charconv>
#include <limits>

#include "blowup/errors.hpp"

namespace blowup {
namespace {

std::int64_t parse_int(std::string_view text, std::string_view whole) {
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw ContractViolation("malformed rational '" + std::string(whole) + "'");
  }
  return value;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  if (text.empty()) throw ContractViolation("empty rational");
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    std::int64_t num = parse_int(text.substr(0, slash), text);
    std::int64_t den = parse_int(text.substr(slash + 1), text);
    if (den == 0) throw ContractViolation("zero denominator in '" + std::string(text) + "'");
    return Rational(num, den);
  }
  auto dot = text.find('.');
  if (dot == std::string_view::npos) return Rational(parse_int(text, text));

  std::string_view int_part = text.substr(0, dot);
  std::string_view frac_part = text.substr(dot + 1);
  bool negative = !int_part.empty() && int_part.front() == '-';
  if (negative) int_part.remove_prefix(1);
  if (frac_part.size() > 15 || (int_part.empty() && frac_part.empty())) {
    throw ContractViolation("malformed rational '" + std::string(text) + "'");
  }
  std::int64_t whole = int_part.empty() ? 0 : parse_int(int_part, text);
  std::int64_t den = 1;
  std::int64_t frac = 0;
  for (char c : frac_part) {
    if (c < '0' || c > '9') throw ContractViolation("malformed rational '" + std::string(text) + "'");
    frac = frac * 10 + (c - '0');
    den *= 10;
  }
  Rational value = Rational(whole) + Rational(frac, den);
  return negative ? -value : value;
}

std::string to_string(const Rational& value) {
  if (value.denominator() == 1) return std::to_string(value.numerator());
  return std::to_string(value.numerator()) + "/" + std::to_string(value.denominator());
}

double to_double(const Rational& value) {
  return static_cast<double>(value.numerator()) / static_cast<double>(value.denominator());
}

std::int64_t floor_times(const Rational& value, std::int64_t count) {
  __int128 num = static_cast<__int128>(value.numerator()) * count;
  __int128 den = value.denominator();
  __int128 q = num / den;
  if ((num % den != 0) && (num < 0)) --q;
  return static_cast<std::int64_t>(q);
}

std::int64_t ceil_times(const Rational& value, std::int64_t count) {
  __int128 num = static_cast<__int128>(value.numerator()) * count;
  __int128 den = value.denominator();
  __int128 q = num / den;
  if ((num % den != 0) && (num > 0)) ++q;
  return static_cast<std::int64_t>(q);
}

}  // namespace blowup
