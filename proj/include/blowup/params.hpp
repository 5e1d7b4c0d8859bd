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

#ifndef BLOWUP_PARAMS_HPP
#define BLOWUP_PARAMS_HPP

#include <cstddef>
#include <string>

#include "blowup/rational.hpp"

namespace blowup {

/// The constants driving the embedder, strictly ordered
///   eps < eps1 < eps2 < d3 < d2 < d1 < delta <= 1.
///
///   eps    selection window half-width around the pair density
///   eps1   fraction of same-cluster vertices allowed to fail the pairwise window
///   eps2   exceptional-set bounds in the audits (|E_i|, U_t degree profile)
///   d3     Hall-condition margins and sampled audit subset sizes
///   d2     sweep period T1 = floor(d2 n); buffer coverage threshold d2 |B_i|
///   d1     buffer fraction ceil(d1 N); pattern exceptional threshold d1^2 n
///   delta  minimum pair density
struct ParameterCascade {
  Rational eps;
  Rational eps1;
  Rational eps2;
  Rational d3;
  Rational d2;
  Rational d1;
  Rational delta{1};
  std::size_t max_degree = 0;
  Rational c{1, 4};       // every restriction set has size >= c N
  Rational alpha{1, 50};  // at most alpha N restricted vertices per cluster
  Rational alpha_batch{1, 20};

  /// Default cascade for a given delta and pattern max degree: d1 =
  /// (9/25) delta / ceil(Delta/2)^2, eps = (2/3) d1, and the four constants
  /// between them evenly spaced.
  static ParameterCascade defaults(const Rational& delta, std::size_t max_degree);

  /// Throws InvariantError("cascade.order") unless the chain is strictly
  /// increasing, positive, and delta <= 1.
  void validate() const;

  friend bool operator==(const ParameterCascade&, const ParameterCascade&) = default;
};

std::string describe(const ParameterCascade& p);

}  // namespace blowup

#endif  // BLOWUP_PARAMS_HPP
