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
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "pwnorm/detail/format.hpp"
#include "pwnorm/error.hpp"
#include "pwnorm/index.hpp"

namespace pwnorm {

/// Cell identifier. Two points share a cell iff their keys are equal.
using CellKey = std::vector<std::int64_t>;

/// An intensional partition of N^m given by a cell-key function.
///
/// Every key is a projection: it lists the values of a set of coordinates
/// (which set may depend on a selector coordinate), so a key that depends on
/// a coordinate is injective along it.
class Partition {
 public:
  enum class Kind { kDiscrete, kIndiscrete, kGrouping, kPairGrouping, kSelect, kSplit };

  Partition() : Partition(discrete()) {}

  static Partition discrete() { return Partition(make(Kind::kDiscrete)); }
  static Partition indiscrete() { return Partition(make(Kind::kIndiscrete)); }

  /// Cells fix the coordinates in `axes` (0-based) and vary the rest.
  static Partition grouping(std::vector<std::size_t> axes) {
    std::sort(axes.begin(), axes.end());
    axes.erase(std::unique(axes.begin(), axes.end()), axes.end());
    auto n = make(Kind::kGrouping);
    n->axes = std::move(axes);
    return Partition(std::move(n));
  }

  /// For pair-structured indices (s_1,t_1,...,s_n,t_n): cells fix the pairs
  /// listed in `pairs` (1-based pair numbers).
  static Partition pair_grouping(std::vector<std::size_t> pairs) {
    std::sort(pairs.begin(), pairs.end());
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
    for (std::size_t k : pairs) detail::require(k >= 1, "pair numbers are 1-based");
    auto n = make(Kind::kPairGrouping);
    n->axes = std::move(pairs);
    return Partition(std::move(n));
  }

  /// Disjoint union: the first coordinate picks a branch, applied to the rest.
  static Partition select(std::vector<Partition> branches) {
    detail::require(!branches.empty(), "select needs at least one branch");
    auto n = make(Kind::kSelect);
    n->children = std::move(branches);
    return Partition(std::move(n));
  }

  /// Product partition: `left` on the first `left_arity` coordinates, `right`
  /// on the rest; cells are products of cells.
  static Partition split(std::size_t left_arity, Partition left, Partition right) {
    auto n = make(Kind::kSplit);
    n->split_at = left_arity;
    n->children = {std::move(left), std::move(right)};
    return Partition(std::move(n));
  }

  Kind kind() const { return node_->kind; }
  const std::vector<std::size_t>& axes() const { return node_->axes; }
  const std::vector<Partition>& children() const { return node_->children; }
  std::size_t split_at() const { return node_->split_at; }

  CellKey key(const Index& b) const {
    CellKey k;
    append_key(b, k);
    return k;
  }

  bool depends_on(const Index& at, std::size_t axis) const {
    switch (kind()) {
      case Kind::kDiscrete:
        return axis < at.arity();
      case Kind::kIndiscrete:
        return false;
      case Kind::kGrouping:
        return std::binary_search(axes().begin(), axes().end(), axis);
      case Kind::kPairGrouping:
        return std::binary_search(axes().begin(), axes().end(), axis / 2 + 1);
      case Kind::kSelect: {
        if (axis == 0) return true;
        const Coord a = at[0];
        if (a > children().size()) return true;
        return children()[a - 1].depends_on(at.slice(1, at.arity() - 1),
                                            axis - 1);
      }
      case Kind::kSplit: {
        const std::size_t m = split_at();
        if (axis < m) return children()[0].depends_on(at.slice(0, m), axis);
        return children()[1].depends_on(at.slice(m, at.arity() - m), axis - m);
      }
    }
    return true;
  }

  /// True when this partition is discrete on indices of the given arity.
  bool is_discrete(std::size_t arity) const {
    switch (kind()) {
      case Kind::kDiscrete:
        return true;
      case Kind::kGrouping:
        return axes().size() == arity &&
               (arity == 0 || axes().back() == arity - 1);
      case Kind::kPairGrouping:
        return arity % 2 == 0 && axes().size() == arity / 2 &&
               (arity == 0 || axes().back() == arity / 2);
      case Kind::kSplit:
        return children()[0].is_discrete(split_at()) &&
               children()[1].is_discrete(arity - split_at());
      default:
        return arity == 0;
    }
  }

  /// True when this partition has a single cell.
  bool is_indiscrete() const {
    switch (kind()) {
      case Kind::kIndiscrete:
        return true;
      case Kind::kGrouping:
      case Kind::kPairGrouping:
        return axes().empty();
      case Kind::kSplit:
        return children()[0].is_indiscrete() && children()[1].is_indiscrete();
      default:
        return false;
    }
  }

  std::string str() const {
    switch (kind()) {
      case Kind::kDiscrete:
        return "discrete()";
      case Kind::kIndiscrete:
        return "indiscrete()";
      case Kind::kGrouping:
      case Kind::kPairGrouping: {
        const bool pairs = kind() == Kind::kPairGrouping;
        std::string s = pairs ? "pair_grouping(pairs=[" : "grouping(axes=[";
        s += detail::join(std::span<const std::size_t>(axes()), ", ",
                          [pairs](std::size_t a) {
                            return std::to_string(pairs ? a : a + 1);
                          });
        return s + "])";
      }
      case Kind::kSelect:
        return "select(branches=[" +
               detail::join(std::span<const Partition>(children()), ", ",
                            [](const Partition& p) { return p.str(); }) +
               "])";
      case Kind::kSplit:
        return "split(at=" + std::to_string(split_at()) +
               ", left=" + children()[0].str() +
               ", right=" + children()[1].str() + ")";
    }
    return "?";
  }

  friend bool operator==(const Partition& a, const Partition& b) {
    return a.node_ == b.node_ || a.str() == b.str();
  }

 private:
  struct Node {
    Kind kind = Kind::kDiscrete;
    std::vector<std::size_t> axes;
    std::vector<Partition> children;
    std::size_t split_at = 0;
  };

  static std::shared_ptr<Node> make(Kind k) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    return n;
  }

  explicit Partition(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  void append_key(const Index& b, CellKey& out) const {
    switch (kind()) {
      case Kind::kDiscrete:
        for (Coord c : b.coords()) out.push_back(static_cast<std::int64_t>(c));
        return;
      case Kind::kIndiscrete:
        return;
      case Kind::kGrouping:
        for (std::size_t a : axes()) {
          detail::require(a < b.arity(), "grouping axis beyond index arity");
          out.push_back(static_cast<std::int64_t>(b[a]));
        }
        return;
      case Kind::kPairGrouping:
        for (std::size_t k : axes()) {
          detail::require(2 * k <= b.arity(), "pair number beyond index arity");
          out.push_back(static_cast<std::int64_t>(b[2 * k - 2]));
          out.push_back(static_cast<std::int64_t>(b[2 * k - 1]));
        }
        return;
      case Kind::kSelect: {
        detail::require(b.arity() >= 1, "cannot partition an empty index");
        const Coord a = b[0];
        detail::require(a <= children().size(),
                        "child tag " + std::to_string(a) + " out of range");
        out.push_back(static_cast<std::int64_t>(a));
        children()[a - 1].append_key(b.slice(1, b.arity() - 1), out);
        return;
      }
      case Kind::kSplit: {
        const std::size_t m = split_at();
        detail::require(m <= b.arity(), "split point beyond index arity");
        CellKey left;
        children()[0].append_key(b.slice(0, m), left);
        out.push_back(static_cast<std::int64_t>(left.size()));
        out.insert(out.end(), left.begin(), left.end());
        children()[1].append_key(b.slice(m, b.arity() - m), out);
        return;
      }
    }
  }

  std::shared_ptr<const Node> node_;
};

}  // namespace pwnorm
