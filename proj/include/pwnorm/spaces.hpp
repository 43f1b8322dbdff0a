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

#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "pwnorm/error.hpp"
#include "pwnorm/family.hpp"
#include "pwnorm/restrict.hpp"

namespace pwnorm {

/// l_p on N: the discrete partition with weight 1.
inline Family make_lp(double p) {
  return Family::explicit_list(p, 1, {{Partition::discrete(), Weight::one()}});
}

/// Weighted l_2 on N: one cell.
inline Family make_l2(double p, Weight w) {
  return Family::explicit_list(p, 1, {{Partition::indiscrete(), std::move(w)}});
}

/// (sum l_2)_p on N^2: cells {n} x N.
inline Family make_sum_l2_lp(double p, Weight w) {
  return Family::explicit_list(p, 2, {{Partition::grouping({0}), std::move(w)}});
}

/// max of the l_p norm and the w-weighted l_2 norm.
inline Family make_rosenthal_xp(double p, Weight w) {
  return Family::explicit_list(
      p, 1, {{Partition::discrete(), Weight::one()}, {Partition::indiscrete(), std::move(w)}});
}

/// Four members on N^2 indexed by (i, j): one cell with w_i w'_j, rows with
/// w'_j, columns with w_i, points with 1.
inline Family make_schechtman(double p, Weight w, Weight w2) {
  const Weight wi = Weight::lift({0}, std::move(w));
  const Weight wj = Weight::lift({1}, std::move(w2));
  return Family::explicit_list(p, 2,
                               {{Partition::indiscrete(), Weight::product({wi, wj})},
                                {Partition::grouping({0}), wj},
                                {Partition::grouping({1}), wi},
                                {Partition::discrete(), Weight::one()}});
}

/// 2^n members on (N^2)^n: fix the pairs in I, weigh by w at the first
/// coordinate of every free pair.
inline Family make_Yn(double p, std::size_t n, Weight w) {
  return Family::subset_lattice(p, n, std::move(w));
}

inline Family p2w_sum(std::vector<Family> children, Weight w) {
  return Family::sum(std::move(children), std::move(w));
}

/// Outer weight of lp_sum: W(a) = 2^{-a (p-2)/(2p)} for the 1-based child
/// number a, so that sum_a W(a)^{2p/(p-2)} = sum_a 2^{-a} < 1.
inline Weight lp_sum_weight(double p) {
  return Weight::geometric(std::pow(2.0, -(p - 2.0) / (2.0 * p)));
}

inline Family lp_sum(std::vector<Family> children) {
  detail::require(!children.empty(), "a sum needs at least one child");
  const double p = children.front().p();
  return p2w_sum(std::move(children), lp_sum_weight(p));
}

inline Family tensor_family(Family left, Family right) {
  return Family::tensor(std::move(left), std::move(right));
}

/// Adds (discrete, 1) and an indiscrete member when missing. The indiscrete
/// weight defaults to the pointwise minimum of the existing member weights.
inline Family make_admissible(const Family& f, std::optional<Weight> indiscrete = {},
                              const Caps& caps = {}) {
  if (f.admissible()) return f;
  std::vector<PairPW> extra;
  if (!f.has_discrete_unit()) extra.push_back({Partition::discrete(), Weight::one()});
  if (!f.has_indiscrete()) {
    if (!indiscrete) {
      const Family* g = &f;
      while (const auto* e = g->as<Family::EnvelopeNode>()) g = &e->inner[0];
      const auto members = enumerate_members(*g, caps.max_global_members);
      if (!members) {
        throw CapacityError("too many members to take their minimum weight; "
                            "give the indiscrete weight explicitly");
      }
      std::vector<Weight> ws;
      for (const auto& m : *members) ws.push_back(m.pair.weight);
      indiscrete = Weight::min_of(std::move(ws));
    }
    extra.push_back({Partition::indiscrete(), *indiscrete});
  }
  return Family::union_of({f, Family::explicit_list(f.p(), f.arity(), std::move(extra))});
}

/// Ordinal w*q + r below w^2.
struct OrdinalDesc {
  std::size_t q = 0;
  std::size_t r = 0;
  /// Predecessors kept at limit stages.
  std::size_t limit_truncation = 2;
};

/// Transfinite sums: stage 0 is the one-dimensional admissible l_p, a
/// successor sums two copies with weight 2^{(2-p)/(2p)}, a limit w*q sums
/// the first L stages w*(q-1) + r, r < L, with weight 1.
inline Family xp_alpha(double p, const OrdinalDesc& alpha) {
  detail::require(alpha.limit_truncation >= 1, "limit truncation must be >= 1");
  const Weight succ = Weight::constant(std::pow(2.0, (2.0 - p) / (2.0 * p)));
  Family base = make_admissible(make_lp(p));
  for (std::size_t level = 1; level <= alpha.q; ++level) {
    std::vector<Family> stages;
    Family s = base;
    for (std::size_t r = 0; r < alpha.limit_truncation; ++r) {
      if (r) s = p2w_sum({s, s}, succ);
      stages.push_back(s);
    }
    base = p2w_sum(std::move(stages), Weight::one());
  }
  for (std::size_t r = 0; r < alpha.r; ++r) base = p2w_sum({base, base}, succ);
  return base;
}

/// B_p-style sum of Rosenthal spaces with weights 1/k, k = 1..count.
inline Family make_bp(double p, std::size_t count) {
  detail::require(count >= 1, "need at least one summand");
  std::vector<Family> children;
  for (std::size_t k = 1; k <= count; ++k) {
    children.push_back(make_rosenthal_xp(p, Weight::constant(1.0 / static_cast<double>(k))));
  }
  return lp_sum(std::move(children));
}

}  // namespace pwnorm
