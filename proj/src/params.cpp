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

#include "blowup/params.hpp"

#include <algorithm>
#include <array>

#include "blowup/errors.hpp"

namespace blowup {

ParameterCascade ParameterCascade::defaults(const Rational& delta, std::size_t max_degree) {
  ParameterCascade p;
  p.delta = delta;
  p.max_degree = max_degree;
  const auto half = static_cast<std::int64_t>((max_degree + 1) / 2);
  p.d1 = delta * Rational(9, 25) / std::max<std::int64_t>(1, half * half);
  p.eps = p.d1 * Rational(2, 3);
  const Rational step = (p.d1 - p.eps) / 5;
  p.eps1 = p.eps + step;
  p.eps2 = p.eps + step * 2;
  p.d3 = p.eps + step * 3;
  p.d2 = p.eps + step * 4;
  return p;
}

void ParameterCascade::validate() const {
  const std::array<const Rational*, 7> chain{&eps, &eps1, &eps2, &d3, &d2, &d1, &delta};
  static constexpr std::array<const char*, 7> kNames{"eps", "eps1", "eps2", "d3", "d2", "d1", "delta"};
  if (eps <= 0) throw InvariantError("cascade.order", "eps must be positive");
  for (std::size_t i = 1; i < chain.size(); ++i) {
    if (!(*chain[i - 1] < *chain[i])) {
      throw InvariantError("cascade.order", std::string(kNames[i - 1]) + " = " + to_string(*chain[i - 1]) +
                                                " must be smaller than " + kNames[i] + " = " + to_string(*chain[i]));
    }
  }
  if (delta > 1) throw InvariantError("cascade.order", "delta must not exceed 1");
  if (c <= 0 || c > 1) throw InvariantError("cascade.restriction", "c must lie in (0,1]");
  if (alpha < 0 || alpha > 1) throw InvariantError("cascade.restriction", "alpha must lie in [0,1]");
  if (alpha_batch <= 0 || alpha_batch > 1) throw InvariantError("cascade.batch", "alpha_batch must lie in (0,1]");
}

std::string describe(const ParameterCascade& p) {
  return "eps=" + to_string(p.eps) + " eps1=" + to_string(p.eps1) + " eps2=" + to_string(p.eps2) +
         " d3=" + to_string(p.d3) + " d2=" + to_string(p.d2) + " d1=" + to_string(p.d1) +
         " delta=" + to_string(p.delta) + " Delta=" + std::to_string(p.max_degree) + " c=" + to_string(p.c) +
         " alpha=" + to_string(p.alpha) + " alpha_batch=" + to_string(p.alpha_batch);
}

}  // namespace blowup
