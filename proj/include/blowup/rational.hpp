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

#ifndef BLOWUP_RATIONAL_HPP
#define BLOWUP_RATIONAL_HPP

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/rational.hpp>

namespace blowup {

/// Exact rational used for densities and every threshold parameter.
using Rational = boost::rational<std::int64_t>;

/// Parses "p/q", an integer, or a finite decimal such as "0.125" exactly.
/// Throws ContractViolation on malformed text.
Rational parse_rational(std::string_view text);

/// Canonical "p/q" form (or "p" when q == 1); parse_rational inverts it.
std::string to_string(const Rational& value);

double to_double(const Rational& value);

/// floor(value * count), exact.
std::int64_t floor_times(const Rational& value, std::int64_t count);

/// ceil(value * count), exact.
std::int64_t ceil_times(const Rational& value, std::int64_t count);

}  // namespace blowup

#endif  // BLOWUP_RATIONAL_HPP
