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
#include <cstddef>
#include <limits>
#include <set>
#include <string>
#include <vector>

#include "pwnorm/error.hpp"
#include "pwnorm/index.hpp"

namespace pwnorm {

/// Identical coefficients at `tmpl` with coordinate `axis` (0-based) sweeping
/// [lo, hi]. The template's own value at `axis` is normalized to `lo`.
struct ConstantBlock {
  Index tmpl;
  std::size_t axis = 0;
  Coord lo = 1;
  Coord hi = 1;
  double coefficient = 0.0;

  std::size_t size() const { return static_cast<std::size_t>(hi - lo + 1); }
  Index point(Coord t) const { return tmpl.with(axis, t); }
};

struct Entry {
  Index index;
  double coefficient = 0.0;
};

/// Either a single point (`axis == kPoint`) or a constant block.
struct Atom {
  static constexpr std::size_t kPoint = std::numeric_limits<std::size_t>::max();

  Index first;  // the point, or the block's point at `lo`
  std::size_t axis = kPoint;
  Coord lo = 0;
  Coord hi = 0;
  double coefficient = 0.0;

  bool is_block() const { return axis != kPoint; }
  std::size_t count() const {
    return is_block() ? static_cast<std::size_t>(hi - lo + 1) : 1;
  }
  Index point(Coord t) const { return first.with(axis, t); }
  Index last() const { return is_block() ? point(hi) : first; }

  /// Whether the point lies in this atom.
  bool contains(const Index& q) const {
    if (!is_block()) return q == first;
    if (q[axis] < lo || q[axis] > hi) return false;
    return q.with(axis, lo) == first;
  }
};

namespace detail {

/// Whether two atoms share a point.
inline bool atoms_overlap(const Atom& a, const Atom& b) {
  if (!a.is_block()) return b.contains(a.first);
  if (!b.is_block()) return a.contains(b.first);
  if (a.axis == b.axis) {
    if (a.hi < b.lo || b.hi < a.lo) return false;
    return a.first.with(a.axis, 1) == b.first.with(b.axis, 1);
  }
  // Only candidate: a's sweep at b's fixed value and vice versa.
  const Coord ta = b.first[a.axis];
  const Coord tb = a.first[b.axis];
  if (ta < a.lo || ta > a.hi || tb < b.lo || tb > b.hi) return false;
  return a.point(ta) == b.point(tb);
}

}  // namespace detail

/// A finitely supported real vector on N^m, with constant-block compression.
class SparseVector {
 public:
  SparseVector() = default;
  explicit SparseVector(std::size_t arity) : arity_(arity) {}

  SparseVector(std::size_t arity, std::vector<Entry> entries,
               std::vector<ConstantBlock> blocks = {})
      : arity_(arity) {
    for (auto& e : entries) add(std::move(e.index), e.coefficient);
    for (auto& b : blocks) add_block(std::move(b));
  }

  std::size_t arity() const { return arity_; }
  const std::vector<Entry>& entries() const { return entries_; }
  const std::vector<ConstantBlock>& blocks() const { return blocks_; }
  bool empty() const { return entries_.empty() && blocks_.empty(); }

  SparseVector& add(Index index, double coefficient) {
    detail::require(index.arity() == arity_,
                    "entry " + index.str() + " has arity " +
                        std::to_string(index.arity()) + ", expected " +
                        std::to_string(arity_));
    detail::require(coefficient != 0.0 && std::isfinite(coefficient),
                    "coefficients must be finite and nonzero");
    Atom a;
    a.first = index;
    a.coefficient = coefficient;
    check_disjoint(a);
    entries_.push_back({std::move(index), coefficient});
    return *this;
  }

  SparseVector& add_block(ConstantBlock b) {
    detail::require(b.tmpl.arity() == arity_, "block template arity mismatch");
    detail::require(b.axis < arity_, "block running coordinate out of range");
    detail::require(b.lo >= 1 && b.hi >= b.lo, "block range must satisfy 1 <= lo <= hi");
    detail::require(b.coefficient != 0.0 && std::isfinite(b.coefficient),
                    "coefficients must be finite and nonzero");
    b.tmpl = b.tmpl.with(b.axis, b.lo);
    check_disjoint(as_atom(b));
    blocks_.push_back(std::move(b));
    return *this;
  }

  /// Number of points after expanding every block.
  std::size_t support_size() const {
    std::size_t n = entries_.size();
    for (const auto& b : blocks_) n += b.size();
    return n;
  }

  /// Entries and blocks, sorted by their first point.
  std::vector<Atom> atoms() const {
    std::vector<Atom> out;
    out.reserve(entries_.size() + blocks_.size());
    for (const auto& e : entries_) {
      Atom a;
      a.first = e.index;
      a.coefficient = e.coefficient;
      out.push_back(std::move(a));
    }
    for (const auto& b : blocks_) out.push_back(as_atom(b));
    std::sort(out.begin(), out.end(),
              [](const Atom& x, const Atom& y) { return x.first < y.first; });
    return out;
  }

  /// Same vector with every block flattened into entries.
  SparseVector expanded() const {
    SparseVector out(arity_);
    out.entries_ = entries_;
    for (const auto& b : blocks_) {
      for (Coord t = b.lo; t <= b.hi; ++t) {
        out.entries_.push_back({b.point(t), b.coefficient});
      }
    }
    std::sort(out.entries_.begin(), out.entries_.end(),
              [](const Entry& x, const Entry& y) { return x.index < y.index; });
    return out;
  }

  /// Sorted expanded support.
  std::vector<Index> support() const {
    auto e = expanded();
    std::vector<Index> out;
    out.reserve(e.entries_.size());
    for (const auto& en : e.entries_) out.push_back(en.index);
    return out;
  }

  /// Coefficients of the expanded vector, aligned with support().
  std::vector<double> coefficients() const {
    auto e = expanded();
    std::vector<double> out;
    out.reserve(e.entries_.size());
    for (const auto& en : e.entries_) out.push_back(en.coefficient);
    return out;
  }

 private:
  static Atom as_atom(const ConstantBlock& b) {
    Atom a;
    a.first = b.tmpl.with(b.axis, b.lo);
    a.axis = b.axis;
    a.lo = b.lo;
    a.hi = b.hi;
    a.coefficient = b.coefficient;
    return a;
  }

  void check_disjoint(const Atom& a) {
    for (const auto& b : blocks_) {
      if (detail::atoms_overlap(a, as_atom(b))) {
        detail::fail_validation("point set overlaps a block at " +
                                a.first.str());
      }
    }
    if (a.is_block()) {
      for (const auto& e : entries_) {
        if (a.contains(e.index)) {
          detail::fail_validation("block overlaps point " + e.index.str());
        }
      }
    } else {
      if (points_.size() != entries_.size()) {
        points_.clear();
        for (const auto& e : entries_) points_.insert(e.index);
      }
      if (!points_.insert(a.first).second) {
        detail::fail_validation("duplicate point " + a.first.str());
      }
    }
  }

  std::size_t arity_ = 0;
  std::vector<Entry> entries_;
  std::vector<ConstantBlock> blocks_;
  std::set<Index> points_;
};

}  // namespace pwnorm
