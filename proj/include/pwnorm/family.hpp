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

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "pwnorm/error.hpp"
#include "pwnorm/index.hpp"
#include "pwnorm/partition.hpp"
#include "pwnorm/weight.hpp"

namespace pwnorm {

/// One member (P_k, W_k) of a family.
struct PairPW {
  Partition partition;
  Weight weight;

  std::string str() const {
    return "pair(partition=" + partition.str() + ", weight=" + weight.str() + ")";
  }

  friend bool operator==(const PairPW&, const PairPW&) = default;
};

inline bool is_unit_weight(const Weight& w) {
  return w.kind() == Weight::Kind::kOne ||
         (w.kind() == Weight::Kind::kConstant && w.parameter() == 1.0);
}

/// Subsets of {1..n} ordered by size, then lexicographically.
inline std::vector<std::vector<std::size_t>> subsets_by_size(std::size_t n) {
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    std::vector<std::size_t> s;
    for (std::size_t k = 0; k < n; ++k) {
      if (mask & (std::size_t{1} << k)) s.push_back(k + 1);
    }
    out.push_back(std::move(s));
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });
  return out;
}

/// Member order of a pair-structured lattice: by size, then lexicographic,
/// except that n = 3 lists {2,3} before {1,3}.
inline std::vector<std::vector<std::size_t>> lattice_subsets(std::size_t n) {
  auto out = subsets_by_size(n);
  if (n == 3) std::swap(out[5], out[6]);
  return out;
}

inline std::string subset_str(const std::vector<std::size_t>& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(s[i]);
  }
  return out + "}";
}

/// The member of a pair-structured lattice that fixes the pairs in `fixed`:
/// partition pair_grouping(fixed), weight prod_{k not fixed} base(s_k).
inline PairPW lattice_member(std::size_t n, const std::vector<std::size_t>& fixed,
                             const Weight& base) {
  std::vector<Weight> factors;
  for (std::size_t k = 1; k <= n; ++k) {
    if (!std::binary_search(fixed.begin(), fixed.end(), k)) {
      factors.push_back(Weight::lift({2 * k - 2}, base));
    }
  }
  return {Partition::pair_grouping(fixed), Weight::product(std::move(factors))};
}

/// An exponent p > 2 and a collection of (partition, weight) members over
/// N^arity. Immutable; copies share structure.
class Family {
 public:
  struct ExplicitList {
    std::vector<PairPW> members;
  };
  /// One member per subset I of {1..n}, see lattice_member().
  struct SubsetLattice {
    std::size_t n = 0;
    Weight base;
  };
  /// (p,2,W)-sum. Points are (a, child point, 1, ..., 1) with a the 1-based
  /// child number; shorter children are padded with ones.
  struct SumNode {
    std::vector<Family> children;
    Weight outer;
  };
  /// Members are products of a left member and a right member.
  struct TensorNode {
    std::vector<Family> factors;  // exactly two
  };
  /// The refinement closure of `inner`.
  struct EnvelopeNode {
    std::vector<Family> inner;  // exactly one
  };
  /// Members of all parts.
  struct UnionNode {
    std::vector<Family> parts;
  };

  using Node = std::variant<ExplicitList, SubsetLattice, SumNode, TensorNode,
                            EnvelopeNode, UnionNode>;

  static Family explicit_list(double p, std::size_t arity,
                              std::vector<PairPW> members) {
    detail::require(!members.empty(), "a family needs at least one member");
    return Family(p, arity, ExplicitList{std::move(members)});
  }

  static Family subset_lattice(double p, std::size_t n, Weight base) {
    detail::require(n >= 1, "lattice needs n >= 1");
    detail::require(n <= 20, "lattice size capped at n = 20");
    return Family(p, 2 * n, SubsetLattice{n, std::move(base)});
  }

  static Family sum(std::vector<Family> children, Weight outer) {
    detail::require(!children.empty(), "a sum needs at least one child");
    const double p = children.front().p();
    std::size_t arity = 0;
    for (std::size_t a = 0; a < children.size(); ++a) {
      detail::require(children[a].p() == p, "summands must share p");
      detail::require(children[a].admissible(),
                      "summand " + std::to_string(a + 1) +
                          " is not admissible (needs discrete and indiscrete members)");
      arity = std::max(arity, children[a].arity());
    }
    return Family(p, arity + 1, SumNode{std::move(children), std::move(outer)});
  }

  static Family tensor(Family left, Family right) {
    detail::require(left.p() == right.p(), "tensor factors must share p");
    detail::require(!left.contains_envelope() && !right.contains_envelope(),
                    "tensor factors need finitely many members");
    const double p = left.p();
    const std::size_t arity = left.arity() + right.arity();
    return Family(p, arity, TensorNode{{std::move(left), std::move(right)}});
  }

  static Family envelope(Family inner) {
    const double p = inner.p();
    const std::size_t arity = inner.arity();
    return Family(p, arity, EnvelopeNode{{std::move(inner)}});
  }

  static Family union_of(std::vector<Family> parts) {
    detail::require(!parts.empty(), "a union needs at least one part");
    for (const auto& f : parts) {
      detail::require(f.p() == parts.front().p(), "united families must share p");
      detail::require(f.arity() == parts.front().arity(),
                      "united families must share the arity");
    }
    const double p = parts.front().p();
    const std::size_t arity = parts.front().arity();
    return Family(p, arity, UnionNode{std::move(parts)});
  }

  double p() const { return impl_->p; }
  std::size_t arity() const { return impl_->arity; }
  const Node& node() const { return impl_->node; }

  template <class T>
  const T* as() const {
    return std::get_if<T>(&impl_->node);
  }

  /// Contains a member that is discrete with weight 1.
  bool has_discrete_unit() const {
    return std::visit(
        [this](const auto& n) -> bool {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, ExplicitList>) {
            return std::any_of(n.members.begin(), n.members.end(),
                               [this](const PairPW& m) {
                                 return m.partition.is_discrete(arity()) &&
                                        is_unit_weight(m.weight);
                               });
          } else if constexpr (std::is_same_v<T, SubsetLattice>) {
            return true;
          } else if constexpr (std::is_same_v<T, SumNode>) {
            return std::all_of(n.children.begin(), n.children.end(),
                               [](const Family& c) { return c.has_discrete_unit(); });
          } else if constexpr (std::is_same_v<T, TensorNode>) {
            return n.factors[0].has_discrete_unit() && n.factors[1].has_discrete_unit();
          } else if constexpr (std::is_same_v<T, EnvelopeNode>) {
            return n.inner[0].has_discrete_unit();
          } else {
            return std::any_of(n.parts.begin(), n.parts.end(),
                               [](const Family& c) { return c.has_discrete_unit(); });
          }
        },
        node());
  }

  /// Contains a member whose partition has a single cell.
  bool has_indiscrete() const {
    return std::visit(
        [](const auto& n) -> bool {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, ExplicitList>) {
            return std::any_of(n.members.begin(), n.members.end(),
                               [](const PairPW& m) { return m.partition.is_indiscrete(); });
          } else if constexpr (std::is_same_v<T, SubsetLattice> ||
                               std::is_same_v<T, SumNode>) {
            return true;
          } else if constexpr (std::is_same_v<T, TensorNode>) {
            return n.factors[0].has_indiscrete() && n.factors[1].has_indiscrete();
          } else if constexpr (std::is_same_v<T, EnvelopeNode>) {
            return n.inner[0].has_indiscrete();
          } else {
            return std::any_of(n.parts.begin(), n.parts.end(),
                               [](const Family& c) { return c.has_indiscrete(); });
          }
        },
        node());
  }

  bool admissible() const { return has_discrete_unit() && has_indiscrete(); }

  /// Weight of the distinguished indiscrete member.
  Weight indiscrete_weight() const {
    return std::visit(
        [this](const auto& n) -> Weight {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, ExplicitList>) {
            for (const auto& m : n.members) {
              if (m.partition.is_indiscrete()) return m.weight;
            }
            throw ValidationError("family has no indiscrete member");
          } else if constexpr (std::is_same_v<T, SubsetLattice>) {
            return lattice_member(n.n, {}, n.base).weight;
          } else if constexpr (std::is_same_v<T, SumNode>) {
            return sum_indiscrete_weight(n);
          } else if constexpr (std::is_same_v<T, TensorNode>) {
            const std::size_t m1 = n.factors[0].arity();
            const std::size_t m2 = n.factors[1].arity();
            return Weight::product(
                {Weight::lift(axis_range(0, m1), n.factors[0].indiscrete_weight()),
                 Weight::lift(axis_range(m1, m2), n.factors[1].indiscrete_weight())});
          } else if constexpr (std::is_same_v<T, EnvelopeNode>) {
            return n.inner[0].indiscrete_weight();
          } else {
            for (const auto& part : n.parts) {
              if (part.has_indiscrete()) return part.indiscrete_weight();
            }
            (void)this;
            throw ValidationError("family has no indiscrete member");
          }
        },
        node());
  }

  bool contains_envelope() const {
    return std::visit(
        [](const auto& n) -> bool {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, EnvelopeNode>) {
            return true;
          } else if constexpr (std::is_same_v<T, SumNode>) {
            return std::any_of(n.children.begin(), n.children.end(),
                               [](const Family& c) { return c.contains_envelope(); });
          } else if constexpr (std::is_same_v<T, TensorNode>) {
            return n.factors[0].contains_envelope() || n.factors[1].contains_envelope();
          } else if constexpr (std::is_same_v<T, UnionNode>) {
            return std::any_of(n.parts.begin(), n.parts.end(),
                               [](const Family& c) { return c.contains_envelope(); });
          } else {
            return false;
          }
        },
        node());
  }

  /// Throws ValidationError unless `b` lies in the family's base set.
  void validate_index(const Index& b) const {
    detail::require(b.arity() == arity(),
                    "index " + b.str() + " has arity " + std::to_string(b.arity()) +
                        ", family expects " + std::to_string(arity()));
    if (const auto* s = as<SumNode>()) {
      const Coord a = b[0];
      detail::require(a >= 1 && a <= s->children.size(),
                      "index " + b.str() + " names summand " + std::to_string(a) +
                          " of " + std::to_string(s->children.size()));
      const Family& child = s->children[a - 1];
      for (std::size_t i = 1 + child.arity(); i < b.arity(); ++i) {
        detail::require(b[i] == 1, "index " + b.str() +
                                       " has a non-unit padding coordinate");
      }
      child.validate_index(b.slice(1, child.arity()));
    } else if (const auto* t = as<TensorNode>()) {
      const std::size_t m1 = t->factors[0].arity();
      t->factors[0].validate_index(b.slice(0, m1));
      t->factors[1].validate_index(b.slice(m1, arity() - m1));
    } else if (const auto* e = as<EnvelopeNode>()) {
      e->inner[0].validate_index(b);
    } else if (const auto* u = as<UnionNode>()) {
      for (const auto& part : u->parts) part.validate_index(b);
    }
  }

  /// Short structural description.
  std::string str() const {
    return std::visit(
        [](const auto& n) -> std::string {
          using T = std::decay_t<decltype(n)>;
          if constexpr (std::is_same_v<T, ExplicitList>) {
            return "list[" + std::to_string(n.members.size()) + "]";
          } else if constexpr (std::is_same_v<T, SubsetLattice>) {
            return "lattice(n=" + std::to_string(n.n) + ")";
          } else if constexpr (std::is_same_v<T, SumNode>) {
            std::string s = "sum(";
            for (std::size_t i = 0; i < n.children.size(); ++i) {
              if (i) s += ", ";
              s += n.children[i].str();
            }
            return s + ")";
          } else if constexpr (std::is_same_v<T, TensorNode>) {
            return "tensor(" + n.factors[0].str() + ", " + n.factors[1].str() + ")";
          } else if constexpr (std::is_same_v<T, EnvelopeNode>) {
            return "envelope(" + n.inner[0].str() + ")";
          } else {
            std::string s = "union(";
            for (std::size_t i = 0; i < n.parts.size(); ++i) {
              if (i) s += ", ";
              s += n.parts[i].str();
            }
            return s + ")";
          }
        },
        node());
  }

  static std::vector<std::size_t> axis_range(std::size_t first, std::size_t count) {
    std::vector<std::size_t> out(count);
    for (std::size_t i = 0; i < count; ++i) out[i] = first + i;
    return out;
  }

  /// Weight W(a) * w^{a,()}(b) of the sum's global indiscrete member.
  static Weight sum_indiscrete_weight(const SumNode& n) {
    std::vector<Weight> branches;
    branches.reserve(n.children.size());
    for (const auto& c : n.children) branches.push_back(c.indiscrete_weight());
    return Weight::product(
        {Weight::lift({0}, n.outer), Weight::select(std::move(branches))});
  }

 private:
  struct Impl {
    double p = 0.0;
    std::size_t arity = 0;
    Node node;
  };

  Family(double p, std::size_t arity, Node node) {
    detail::require(std::isfinite(p) && p > 2.0, "p must be > 2");
    detail::require(arity >= 1, "arity must be >= 1");
    auto impl = std::make_shared<Impl>();
    impl->p = p;
    impl->arity = arity;
    impl->node = std::move(node);
    impl_ = std::move(impl);
  }

  std::shared_ptr<const Impl> impl_;
};

}  // namespace pwnorm
