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
#include <vector>

#include "pwnorm/detail/format.hpp"
#include "pwnorm/error.hpp"
#include "pwnorm/index.hpp"

namespace pwnorm {

/// An intensional weight function B -> (0,1].
///
/// Scalar variants (power_decay, geometric, explicit, interleave) read the
/// first coordinate of the index they are evaluated at; constant and one read
/// nothing. lift() re-targets a descriptor at chosen coordinates, select()
/// dispatches on the first coordinate (a child tag) and evaluates the chosen
/// branch on the remaining coordinates.
class Weight {
 public:
  enum class Kind {
    kOne,
    kConstant,
    kPowerDecay,
    kGeometric,
    kExplicit,
    kInterleave,
    kLift,
    kProduct,
    kSelect,
    kMin
  };

  Weight() : Weight(one()) {}

  static Weight one() { return Weight(make(Kind::kOne)); }

  static Weight constant(double c) {
    detail::require(c > 0.0 && c <= 1.0,
                    "weight outside (0,1]: " + detail::exact_number(c));
    auto n = make(Kind::kConstant);
    n->value = c;
    return Weight(std::move(n));
  }

  /// w_s = min(1, s^-alpha).
  static Weight power_decay(double alpha) {
    detail::require(alpha > 0.0 && std::isfinite(alpha),
                    "power_decay exponent must be > 0");
    auto n = make(Kind::kPowerDecay);
    n->value = alpha;
    return Weight(std::move(n));
  }

  /// w_s = r^s.
  static Weight geometric(double r) {
    detail::require(r > 0.0 && r < 1.0, "geometric ratio must lie in (0,1)");
    auto n = make(Kind::kGeometric);
    n->value = r;
    return Weight(std::move(n));
  }

  /// Listed values for s = 1..head.size(), then `tail` evaluated at s.
  static Weight explicit_values(std::vector<double> head, Weight tail) {
    for (double v : head) {
      detail::require(v > 0.0 && v <= 1.0,
                      "weight outside (0,1]: " + detail::exact_number(v));
    }
    detail::require(tail.is_scalar(), "explicit tail must be one-dimensional");
    auto n = make(Kind::kExplicit);
    n->head = std::move(head);
    n->children = {std::move(tail)};
    return Weight(std::move(n));
  }

  /// w_{2k} = even(k), w_{2k-1} = odd(k).
  static Weight interleave(Weight even, Weight odd) {
    detail::require(even.is_scalar() && odd.is_scalar(),
                    "interleave components must be one-dimensional");
    auto n = make(Kind::kInterleave);
    n->children = {std::move(even), std::move(odd)};
    return Weight(std::move(n));
  }

  /// W(b) = inner(b restricted to `axes`), axes 0-based.
  static Weight lift(std::vector<std::size_t> axes, Weight inner) {
    detail::require(!axes.empty(), "lift needs at least one coordinate");
    auto n = make(Kind::kLift);
    n->axes = std::move(axes);
    n->children = {std::move(inner)};
    return Weight(std::move(n));
  }

  static Weight product(std::vector<Weight> factors) {
    if (factors.empty()) return one();
    if (factors.size() == 1) return factors.front();
    auto n = make(Kind::kProduct);
    n->children = std::move(factors);
    return Weight(std::move(n));
  }

  /// Branch chosen by the first coordinate (1-based), evaluated on the rest.
  static Weight select(std::vector<Weight> branches) {
    detail::require(!branches.empty(), "select needs at least one branch");
    auto n = make(Kind::kSelect);
    n->children = std::move(branches);
    return Weight(std::move(n));
  }

  static Weight min_of(std::vector<Weight> parts) {
    detail::require(!parts.empty(), "min needs at least one weight");
    if (parts.size() == 1) return parts.front();
    auto n = make(Kind::kMin);
    n->children = std::move(parts);
    return Weight(std::move(n));
  }

  Kind kind() const { return node_->kind; }
  double parameter() const { return node_->value; }
  const std::vector<double>& head() const { return node_->head; }
  const std::vector<std::size_t>& axes() const { return node_->axes; }
  const std::vector<Weight>& children() const { return node_->children; }

  /// True for descriptors that only read one coordinate of the index.
  bool is_scalar() const {
    switch (kind()) {
      case Kind::kOne:
      case Kind::kConstant:
      case Kind::kPowerDecay:
      case Kind::kGeometric:
      case Kind::kExplicit:
      case Kind::kInterleave:
        return true;
      case Kind::kProduct:
      case Kind::kMin:
        return std::all_of(children().begin(), children().end(),
                           [](const Weight& w) { return w.is_scalar(); });
      default:
        return false;
    }
  }

  /// Evaluate along the single coordinate read by a scalar descriptor.
  double at(Coord s) const {
    switch (kind()) {
      case Kind::kOne:
        return 1.0;
      case Kind::kConstant:
        return node_->value;
      case Kind::kPowerDecay:
        return std::min(1.0, std::pow(static_cast<double>(s), -node_->value));
      case Kind::kGeometric:
        return std::pow(node_->value, static_cast<double>(s));
      case Kind::kExplicit:
        if (s <= node_->head.size()) return node_->head[s - 1];
        return children()[0].at(s);
      case Kind::kInterleave:
        return s % 2 == 0 ? children()[0].at(s / 2)
                          : children()[1].at((s + 1) / 2);
      case Kind::kProduct: {
        double v = 1.0;
        for (const auto& c : children()) v *= c.at(s);
        return v;
      }
      case Kind::kMin: {
        double v = 1.0;
        for (const auto& c : children()) v = std::min(v, c.at(s));
        return v;
      }
      default:
        throw ValidationError("descriptor " + str() +
                              " is not one-dimensional");
    }
  }

  double operator()(const Index& b) const {
    switch (kind()) {
      case Kind::kOne:
        return 1.0;
      case Kind::kConstant:
        return node_->value;
      case Kind::kPowerDecay:
      case Kind::kGeometric:
      case Kind::kExplicit:
      case Kind::kInterleave:
        detail::require(b.arity() >= 1, "cannot weigh an empty index");
        return at(b[0]);
      case Kind::kLift:
        return children()[0](b.pick(node_->axes));
      case Kind::kProduct: {
        double v = 1.0;
        for (const auto& c : children()) v *= c(b);
        return v;
      }
      case Kind::kMin: {
        double v = 1.0;
        for (const auto& c : children()) v = std::min(v, c(b));
        return v;
      }
      case Kind::kSelect: {
        detail::require(b.arity() >= 1, "cannot weigh an empty index");
        const Coord a = b[0];
        detail::require(a <= children().size(),
                        "child tag " + std::to_string(a) + " out of range");
        return children()[a - 1](b.slice(1, b.arity() - 1));
      }
    }
    return 1.0;
  }

  /// Whether the value can change when coordinate `axis` of `at` varies.
  bool depends_on(const Index& at, std::size_t axis) const {
    switch (kind()) {
      case Kind::kOne:
      case Kind::kConstant:
        return false;
      case Kind::kPowerDecay:
      case Kind::kGeometric:
      case Kind::kExplicit:
      case Kind::kInterleave:
        return axis == 0;
      case Kind::kLift: {
        const auto& ax = node_->axes;
        const Index sub = at.pick(ax);
        for (std::size_t i = 0; i < ax.size(); ++i) {
          if (ax[i] == axis && children()[0].depends_on(sub, i)) return true;
        }
        return false;
      }
      case Kind::kProduct:
      case Kind::kMin:
        return std::any_of(
            children().begin(), children().end(),
            [&](const Weight& w) { return w.depends_on(at, axis); });
      case Kind::kSelect: {
        if (axis == 0) return true;
        const Coord a = at[0];
        if (a > children().size()) return true;
        return children()[a - 1].depends_on(at.slice(1, at.arity() - 1),
                                            axis - 1);
      }
    }
    return true;
  }

  /// Canonical text, identical to the configuration syntax.
  std::string str() const {
    auto list = [](const std::vector<Weight>& ws) {
      return "[" +
             detail::join(std::span<const Weight>(ws), ", ",
                          [](const Weight& w) { return w.str(); }) +
             "]";
    };
    switch (kind()) {
      case Kind::kOne:
        return "one()";
      case Kind::kConstant:
        return "constant(c=" + detail::exact_number(node_->value) + ")";
      case Kind::kPowerDecay:
        return "power_decay(alpha=" + detail::exact_number(node_->value) + ")";
      case Kind::kGeometric:
        return "geometric(r=" + detail::exact_number(node_->value) + ")";
      case Kind::kExplicit:
        return "explicit(head=[" +
               detail::join(std::span<const double>(node_->head), ", ",
                            detail::exact_number) +
               "], tail=" + children()[0].str() + ")";
      case Kind::kInterleave:
        return "interleave(even=" + children()[0].str() +
               ", odd=" + children()[1].str() + ")";
      case Kind::kLift:
        return "lift(pos=[" +
               detail::join(std::span<const std::size_t>(node_->axes), ", ",
                            [](std::size_t a) { return std::to_string(a + 1); }) +
               "], inner=" + children()[0].str() + ")";
      case Kind::kProduct:
        return "product(factors=" + list(children()) + ")";
      case Kind::kSelect:
        return "select(branches=" + list(children()) + ")";
      case Kind::kMin:
        return "min(of=" + list(children()) + ")";
    }
    return "?";
  }

  friend bool operator==(const Weight& a, const Weight& b) {
    return a.node_ == b.node_ || a.str() == b.str();
  }

 private:
  struct Node {
    Kind kind = Kind::kOne;
    double value = 1.0;
    std::vector<double> head;
    std::vector<std::size_t> axes;
    std::vector<Weight> children;
  };

  static std::shared_ptr<Node> make(Kind k) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    return n;
  }

  explicit Weight(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  std::shared_ptr<const Node> node_;
};

}  // namespace pwnorm
