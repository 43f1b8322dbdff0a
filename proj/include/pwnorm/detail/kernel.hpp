// Copyright 2026 The pwnorm Authors
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

// Shared arithmetic for every partition-weight evaluation. All code paths that
// must agree bit for bit (assignment search, (Q,T) enumeration, the subset
// form) go through cell_norm().

#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "pwnorm/error.hpp"

namespace pwnorm::detail {

/// Neumaier compensated summation.
struct CompensatedSum {
  double sum = 0.0;
  double comp = 0.0;

  void add(double v) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      comp += (sum - t) + v;
    } else {
      comp += (v - t) + sum;
    }
    sum = t;
  }

  double value() const { return sum + comp; }
};

/// x^2 w^2, the contribution of one coordinate to its cell.
inline double weighted_square(double x, double w) {
  const double v = x * w;
  return v * v;
}

inline double check_finite(double v) {
  if (!std::isfinite(v)) throw NumericError("non-finite intermediate value");
  return v;
}

/// (sum_cells (sum_{j in cell} terms[j])^{p/2})^{1/p}.
///
/// `labels[j]` is the cell of point j; labels must be canonical (cell ids
/// assigned in order of first appearance), so cells are visited by least
/// member and inner sums accumulate in point order.
inline double cell_norm(std::span<const double> terms,
                        std::span<const std::uint32_t> labels,
                        std::size_t num_cells, double p,
                        std::vector<CompensatedSum>& scratch) {
  scratch.assign(num_cells, CompensatedSum{});
  for (std::size_t j = 0; j < terms.size(); ++j) scratch[labels[j]].add(terms[j]);
  CompensatedSum outer;
  const double half = p / 2.0;
  for (const auto& cell : scratch) {
    outer.add(std::pow(check_finite(cell.value()), half));
  }
  return check_finite(std::pow(check_finite(outer.value()), 1.0 / p));
}

inline double cell_norm(std::span<const double> terms,
                        std::span<const std::uint32_t> labels,
                        std::size_t num_cells, double p) {
  std::vector<CompensatedSum> scratch;
  return cell_norm(terms, labels, num_cells, p, scratch);
}

}  // namespace pwnorm::detail
