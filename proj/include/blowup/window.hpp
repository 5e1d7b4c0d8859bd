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


// Exact density windows [(d - eps) s, (d + eps) s] on integer counts.

#ifndef BLOWUP_WINDOW_HPP
#define BLOWUP_WINDOW_HPP

#include <cstddef>
#include <cstdint>

#include "blowup/rational.hpp"

namespace blowup {

struct DensityWindow {
  Rational lo;
  Rational hi;

  static DensityWindow around(const Rational& d, const Rational& eps) { return {d - eps, d + eps}; }

  /// lo * size <= count <= hi * size, exactly.
  bool contains(std::size_t count, std::size_t size) const {
    const auto c = static_cast<__int128>(count);
    const auto s = static_cast<__int128>(size);
    return c * lo.denominator() >= s * lo.numerator() && c * hi.denominator() <= s * hi.numerator();
  }
};

}  // namespace blowup

#endif  // BLOWUP_WINDOW_HPP
