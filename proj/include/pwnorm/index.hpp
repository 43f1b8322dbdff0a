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

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "pwnorm/error.hpp"

namespace pwnorm {

using Coord = std::uint64_t;

/// A point of N^m. Coordinates are 1-based naturals; the arity is the length.
class Index {
 public:
  Index() = default;

  explicit Index(std::vector<Coord> coords) : coords_(std::move(coords)) {
    for (Coord c : coords_) {
      detail::require(c >= 1, "index coordinates must be >= 1");
    }
  }

  Index(std::initializer_list<Coord> coords)
      : Index(std::vector<Coord>(coords)) {}

  std::size_t arity() const { return coords_.size(); }
  Coord operator[](std::size_t i) const { return coords_[i]; }
  std::span<const Coord> coords() const { return coords_; }

  /// Copy with coordinate `axis` replaced.
  Index with(std::size_t axis, Coord value) const {
    Index out = *this;
    out.coords_.at(axis) = value;
    return out;
  }

  /// Coordinates [first, first + count).
  Index slice(std::size_t first, std::size_t count) const {
    Index out;
    out.coords_.assign(coords_.begin() + static_cast<std::ptrdiff_t>(first),
                       coords_.begin() +
                           static_cast<std::ptrdiff_t>(first + count));
    return out;
  }

  /// Coordinates at the given positions, in the given order.
  Index pick(std::span<const std::size_t> axes) const {
    Index out;
    out.coords_.reserve(axes.size());
    for (std::size_t a : axes) out.coords_.push_back(coords_.at(a));
    return out;
  }

  Index concat(const Index& tail) const {
    Index out = *this;
    out.coords_.insert(out.coords_.end(), tail.coords_.begin(),
                       tail.coords_.end());
    return out;
  }

  std::string str() const {
    std::string s = "(";
    for (std::size_t i = 0; i < coords_.size(); ++i) {
      if (i) s += ',';
      s += std::to_string(coords_[i]);
    }
    return s + ")";
  }

  friend auto operator<=>(const Index&, const Index&) = default;
  friend bool operator==(const Index&, const Index&) = default;

 private:
  std::vector<Coord> coords_;
};

}  // namespace pwnorm
