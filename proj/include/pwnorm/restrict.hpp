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
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pwnorm/detail/format.hpp"
#include "pwnorm/error.hpp"
#include "pwnorm/family.hpp"
#include "pwnorm/index.hpp"

namespace pwnorm {

/// Enumeration and search limits. Exceeding one raises CapacityError.
struct Caps {
  std::size_t max_restricted_pairs = 1'000'000;
  std::size_t envelope_max_support = 16;
  std::size_t envelope_max_members = 8;
  std::uint64_t max_assignments = std::uint64_t{1} << 24;
  std::size_t property_max_support = 6;
  std::uint64_t property_max_checks = 10'000'000;
  std::size_t subset_max_length = 24;
  /// Global members tried by the direct evaluator before falling back to
  /// restriction.
  std::size_t max_global_members = 4096;
  /// Worker threads for assignment search; 0 picks the hardware count.
  unsigned threads = 0;
};

/// A sorted, duplicate-free finite set of points shared between pairs.
using Support = std::shared_ptr<const std::vector<Index>>;

inline Support make_support(std::vector<Index> points) {
  detail::require(!points.empty(), "support must be nonempty");
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  const std::size_t m = points.front().arity();
  for (const auto& b : points) {
    detail::require(b.arity() == m, "support points must share the arity");
  }
  return std::make_shared<const std::vector<Index>>(std::move(points));
}

namespace detail {

/// Relabels cells in order of first appearance; returns the cell count.
inline std::size_t canonicalize(std::vector<std::uint32_t>& labels) {
  std::vector<std::uint32_t> map;
  std::uint32_t next = 0;
  for (auto& l : labels) {
    if (l >= map.size()) map.resize(l + 1, UINT32_MAX);
    if (map[l] == UINT32_MAX) map[l] = next++;
    l = map[l];
  }
  return next;
}

inline std::size_t position_in(const std::vector<Index>& sorted, const Index& b) {
  auto it = std::lower_bound(sorted.begin(), sorted.end(), b);
  if (it == sorted.end() || *it != b) {
    throw ValidationError("point " + b.str() + " is outside the support");
  }
  return static_cast<std::size_t>(it - sorted.begin());
}

}  // namespace detail

/// A partition of a finite support, stored as canonical cell labels aligned
/// with the sorted support: cells are numbered by their least point.
struct RestrictedPartition {
  Support support;
  std::vector<std::uint32_t> labels;
  std::size_t num_cells = 0;

  static RestrictedPartition from_labels(Support s, std::vector<std::uint32_t> raw) {
    detail::require(raw.size() == s->size(), "one label per support point");
    RestrictedPartition q;
    q.num_cells = detail::canonicalize(raw);
    q.labels = std::move(raw);
    q.support = std::move(s);
    return q;
  }

  /// Cells as lists of support positions.
  std::vector<std::vector<std::size_t>> cells() const {
    std::vector<std::vector<std::size_t>> out(num_cells);
    for (std::size_t j = 0; j < labels.size(); ++j) out[labels[j]].push_back(j);
    return out;
  }

  std::string str() const {
    std::string s = "{";
    const auto cs = cells();
    for (std::size_t c = 0; c < cs.size(); ++c) {
      if (c) s += ", ";
      s += "{";
      for (std::size_t i = 0; i < cs[c].size(); ++i) {
        if (i) s += ", ";
        s += (*support)[cs[c][i]].str();
      }
      s += "}";
    }
    return s + "}";
  }
};

/// A member restricted to a finite support: cells plus per-point weights.
struct RestrictedPair {
  RestrictedPartition partition;
  std::vector<double> weights;
  std::string id;

  const std::vector<Index>& support() const { return *partition.support; }

  /// Same cells and bit-identical weights.
  bool same_structure(const RestrictedPair& o) const {
    return partition.labels == o.partition.labels && weights == o.weights &&
           support() == o.support();
  }
};

/// Keeps the first occurrence of each structurally distinct pair.
class PairDedup {
 public:
  bool insert(const RestrictedPair& rp) {
    return seen_.emplace(rp.partition.labels, rp.weights).second;
  }

 private:
  std::set<std::pair<std::vector<std::uint32_t>, std::vector<double>>> seen_;
};

inline RestrictedPair restrict_pair(const PairPW& pair, const Support& support,
                                    std::string id = {}) {
  RestrictedPair rp;
  std::map<CellKey, std::uint32_t> cells;
  std::vector<std::uint32_t> labels;
  labels.reserve(support->size());
  rp.weights.reserve(support->size());
  for (const auto& b : *support) {
    auto [it, fresh] = cells.emplace(pair.partition.key(b),
                                     static_cast<std::uint32_t>(cells.size()));
    labels.push_back(it->second);
    const double w = pair.weight(b);
    detail::require(w > 0.0 && w <= 1.0, "weight outside (0,1]: " +
                                              detail::exact_number(w) + " at " + b.str());
    rp.weights.push_back(w);
  }
  rp.partition.support = support;
  rp.partition.num_cells = cells.size();
  rp.partition.labels = std::move(labels);
  rp.id = std::move(id);
  return rp;
}

inline RestrictedPair restrict_pair(const PairPW& pair, std::vector<Index> support) {
  return restrict_pair(pair, make_support(std::move(support)));
}

/// Glue: point j takes the cell and weight of members[choice[j]], and points
/// with different choices never share a cell. The cells are the level sets of
/// `choice` intersected with the chosen members' cells.
inline RestrictedPair refine_restricted(const Support& support,
                                        std::span<const RestrictedPair* const> members,
                                        std::span<const std::uint32_t> choice,
                                        std::span<const std::uint32_t> cells,
                                        std::string id = {}) {
  const std::size_t s = support->size();
  std::size_t stride = 1;
  for (const auto* m : members) stride = std::max(stride, m->partition.num_cells);
  std::vector<std::uint32_t> raw(s);
  RestrictedPair rp;
  rp.weights.resize(s);
  for (std::size_t j = 0; j < s; ++j) {
    const RestrictedPair& m = *members[choice[j]];
    raw[j] = static_cast<std::uint32_t>(cells[j] * stride + m.partition.labels[j]);
    rp.weights[j] = m.weights[j];
  }
  rp.partition = RestrictedPartition::from_labels(support, std::move(raw));
  rp.id = std::move(id);
  return rp;
}

/// Refinement along the level sets of `choice`.
inline RestrictedPair refine_restricted(const Support& support,
                                        std::span<const RestrictedPair* const> members,
                                        std::span<const std::uint32_t> choice,
                                        std::string id = {}) {
  return refine_restricted(support, members, choice, choice, std::move(id));
}

/// Calls fn(labels, num_blocks) for every set partition of {0..s-1}, as
/// restricted growth strings in lexicographic order.
template <class F>
void for_each_set_partition(std::size_t s, F&& fn) {
  if (s == 0) return;
  std::vector<std::uint32_t> a(s, 0);
  std::vector<std::uint32_t> mx(s, 0);  // mx[i] = max(a[0..i-1])
  while (true) {
    std::uint32_t top = 0;
    for (auto v : a) top = std::max(top, v);
    fn(std::span<const std::uint32_t>(a), static_cast<std::size_t>(top) + 1);
    std::size_t i = s - 1;
    while (i > 0 && a[i] > mx[i]) --i;
    if (i == 0) return;
    ++a[i];
    for (std::size_t k = i + 1; k < s; ++k) {
      a[k] = 0;
      mx[k] = std::max(mx[k - 1], a[k - 1]);
    }
  }
}

/// Sum over set partitions Q of an s-set of k^{|Q|} (the work of a full
/// (Q,T) enumeration).
inline double touchard(std::size_t s, std::size_t k) {
  // Stirling numbers of the second kind, row by row.
  std::vector<double> row{1.0};
  for (std::size_t n = 1; n <= s; ++n) {
    std::vector<double> next(n + 1, 0.0);
    for (std::size_t j = 1; j <= n; ++j) {
      next[j] = (j < row.size() ? static_cast<double>(j) * row[j] : 0.0) + row[j - 1];
    }
    row = std::move(next);
  }
  double total = 0.0;
  for (std::size_t j = 0; j < row.size(); ++j) {
    total += row[j] * std::pow(static_cast<double>(k), static_cast<double>(j));
  }
  return total;
}

namespace detail {

inline void check_cap(double count, std::size_t cap, const std::string& what) {
  if (count > static_cast<double>(cap)) {
    throw CapacityError(what + ": " + detail::report_number(count) +
                        " exceeds the cap of " + std::to_string(cap));
  }
}

inline std::vector<RestrictedPair> restrict_impl(const Family& f, const Support& s,
                                                 const Caps& caps);

inline void push_unique(std::vector<RestrictedPair>& out, PairDedup& seen,
                        RestrictedPair rp, const Caps& caps) {
  if (!seen.insert(rp)) return;
  out.push_back(std::move(rp));
  check_cap(static_cast<double>(out.size()), caps.max_restricted_pairs,
            "restricted member count");
}

inline std::vector<RestrictedPair> restrict_sum(const Family& f,
                                                const Family::SumNode& n,
                                                const Support& s, const Caps& caps) {
  const std::size_t total = s->size();
  // Points are sorted by tag, so each child's points form a contiguous run
  // ordered as the child's own sorted support.
  std::vector<std::size_t> tags;
  std::vector<std::size_t> run_start;
  std::vector<std::vector<RestrictedPair>> lists;
  std::size_t j = 0;
  while (j < total) {
    const std::size_t a = (*s)[j][0];
    const Family& child = n.children[a - 1];
    std::vector<Index> pts;
    std::size_t k = j;
    while (k < total && (*s)[k][0] == a) {
      pts.push_back((*s)[k].slice(1, child.arity()));
      ++k;
    }
    tags.push_back(a);
    run_start.push_back(j);
    lists.push_back(restrict_impl(child, make_support(std::move(pts)), caps));
    j = k;
  }
  double count = 1.0;
  for (const auto& l : lists) count *= static_cast<double>(l.size());
  check_cap(count + 1.0, caps.max_restricted_pairs, "restricted member count");

  std::vector<RestrictedPair> out;
  PairDedup seen;
  std::vector<std::size_t> pick(lists.size(), 0);
  while (true) {
    RestrictedPair rp;
    rp.partition.support = s;
    rp.partition.labels.resize(total);
    rp.weights.resize(total);
    std::uint32_t offset = 0;
    std::string id = "sum(";
    for (std::size_t c = 0; c < lists.size(); ++c) {
      const RestrictedPair& m = lists[c][pick[c]];
      for (std::size_t i = 0; i < m.weights.size(); ++i) {
        rp.partition.labels[run_start[c] + i] = offset + m.partition.labels[i];
        rp.weights[run_start[c] + i] = m.weights[i];
      }
      offset += static_cast<std::uint32_t>(m.partition.num_cells);
      if (c) id += ",";
      id += std::to_string(tags[c]) + ":" + m.id;
    }
    rp.partition.num_cells = offset;
    rp.id = id + ")";
    push_unique(out, seen, std::move(rp), caps);
    std::size_t c = 0;
    while (c < pick.size() && ++pick[c] == lists[c].size()) pick[c++] = 0;
    if (c == pick.size()) break;
  }
  const Weight w0 = Family::sum_indiscrete_weight(n);
  RestrictedPair glob = restrict_pair({Partition::indiscrete(), w0}, s, "sum()");
  push_unique(out, seen, std::move(glob), caps);
  (void)f;
  return out;
}

inline std::vector<RestrictedPair> restrict_tensor(const Family::TensorNode& n,
                                                   const Support& s, const Caps& caps) {
  const std::size_t m1 = n.factors[0].arity();
  const std::size_t m2 = n.factors[1].arity();
  std::vector<Index> lp, rp_pts;
  for (const auto& b : *s) {
    lp.push_back(b.slice(0, m1));
    rp_pts.push_back(b.slice(m1, m2));
  }
  const Support ls = make_support(lp);
  const Support rs = make_support(rp_pts);
  std::vector<std::size_t> li(s->size()), ri(s->size());
  for (std::size_t j = 0; j < s->size(); ++j) {
    li[j] = position_in(*ls, lp[j]);
    ri[j] = position_in(*rs, rp_pts[j]);
  }
  const auto left = restrict_impl(n.factors[0], ls, caps);
  const auto right = restrict_impl(n.factors[1], rs, caps);
  check_cap(static_cast<double>(left.size()) * static_cast<double>(right.size()),
            caps.max_restricted_pairs, "restricted member count");
  std::vector<RestrictedPair> out;
  PairDedup seen;
  for (const auto& l : left) {
    for (const auto& r : right) {
      std::vector<std::uint32_t> raw(s->size());
      RestrictedPair rp;
      rp.weights.resize(s->size());
      const auto stride = static_cast<std::uint32_t>(r.partition.num_cells);
      for (std::size_t j = 0; j < s->size(); ++j) {
        raw[j] = l.partition.labels[li[j]] * stride + r.partition.labels[ri[j]];
        rp.weights[j] = l.weights[li[j]] * r.weights[ri[j]];
      }
      rp.partition = RestrictedPartition::from_labels(s, std::move(raw));
      rp.id = "(" + l.id + ")x(" + r.id + ")";
      push_unique(out, seen, std::move(rp), caps);
    }
  }
  return out;
}

inline std::vector<RestrictedPair> restrict_envelope(const Family::EnvelopeNode& n,
                                                     const Support& s, const Caps& caps) {
  const auto inner = restrict_impl(n.inner[0], s, caps);
  const double work = touchard(s->size(), inner.size());
  check_cap(work, caps.max_restricted_pairs, "refinement enumeration size");
  std::vector<const RestrictedPair*> ptrs;
  for (const auto& m : inner) ptrs.push_back(&m);
  std::vector<RestrictedPair> out;
  PairDedup seen;
  std::vector<std::uint32_t> choice(s->size());
  std::size_t counter = 0;
  for_each_set_partition(s->size(), [&](std::span<const std::uint32_t> q, std::size_t k) {
    std::vector<std::uint32_t> t(k, 0);
    while (true) {
      for (std::size_t j = 0; j < q.size(); ++j) choice[j] = t[q[j]];
      push_unique(out, seen,
                  refine_restricted(s, ptrs, choice, q, "refine#" + std::to_string(counter)),
                  caps);
      ++counter;
      std::size_t c = 0;
      while (c < k && ++t[c] == inner.size()) t[c++] = 0;
      if (c == k) break;
    }
  });
  return out;
}

inline std::vector<RestrictedPair> restrict_impl(const Family& f, const Support& s,
                                                 const Caps& caps) {
  std::vector<RestrictedPair> out;
  PairDedup seen;
  if (const auto* l = f.as<Family::ExplicitList>()) {
    for (std::size_t k = 0; k < l->members.size(); ++k) {
      push_unique(out, seen, restrict_pair(l->members[k], s, "m" + std::to_string(k + 1)),
                  caps);
    }
  } else if (const auto* y = f.as<Family::SubsetLattice>()) {
    for (const auto& I : lattice_subsets(y->n)) {
      push_unique(out, seen,
                  restrict_pair(lattice_member(y->n, I, y->base), s, "I" + subset_str(I)),
                  caps);
    }
  } else if (const auto* sn = f.as<Family::SumNode>()) {
    return restrict_sum(f, *sn, s, caps);
  } else if (const auto* t = f.as<Family::TensorNode>()) {
    return restrict_tensor(*t, s, caps);
  } else if (const auto* e = f.as<Family::EnvelopeNode>()) {
    return restrict_envelope(*e, s, caps);
  } else if (const auto* u = f.as<Family::UnionNode>()) {
    for (std::size_t k = 0; k < u->parts.size(); ++k) {
      for (auto& rp : restrict_impl(u->parts[k], s, caps)) {
        rp.id = "u" + std::to_string(k + 1) + ":" + rp.id;
        push_unique(out, seen, std::move(rp), caps);
      }
    }
  }
  return out;
}

}  // namespace detail

/// All distinct restrictions of the family's members to `support`, first
/// occurrences kept.
inline std::vector<RestrictedPair> restrict_family(const Family& f, const Support& support,
                                                   const Caps& caps = {}) {
  for (const auto& b : *support) f.validate_index(b);
  return detail::restrict_impl(f, support, caps);
}

inline std::vector<RestrictedPair> restrict_family(const Family& f,
                                                   std::vector<Index> support,
                                                   const Caps& caps = {}) {
  return restrict_family(f, make_support(std::move(support)), caps);
}

/// A member of a family without envelope nodes, as a global (partition,
/// weight) pair.
struct GlobalMember {
  PairPW pair;
  std::string id;
};

/// Global members of `f`, or nullopt when `f` contains an envelope node or has
/// more than `limit` members.
inline std::optional<std::vector<GlobalMember>> enumerate_members(const Family& f,
                                                                  std::size_t limit) {
  if (f.contains_envelope()) return std::nullopt;
  std::vector<GlobalMember> out;
  if (const auto* l = f.as<Family::ExplicitList>()) {
    if (l->members.size() > limit) return std::nullopt;
    for (std::size_t k = 0; k < l->members.size(); ++k) {
      out.push_back({l->members[k], "m" + std::to_string(k + 1)});
    }
  } else if (const auto* y = f.as<Family::SubsetLattice>()) {
    if ((std::size_t{1} << y->n) > limit) return std::nullopt;
    for (const auto& I : lattice_subsets(y->n)) {
      out.push_back({lattice_member(y->n, I, y->base), "I" + subset_str(I)});
    }
  } else if (const auto* sn = f.as<Family::SumNode>()) {
    std::vector<std::vector<GlobalMember>> lists;
    double count = 1.0;
    for (const auto& c : sn->children) {
      auto l = enumerate_members(c, limit);
      if (!l) return std::nullopt;
      count *= static_cast<double>(l->size());
      if (count + 1.0 > static_cast<double>(limit)) return std::nullopt;
      lists.push_back(std::move(*l));
    }
    std::vector<std::size_t> pick(lists.size(), 0);
    while (true) {
      std::vector<Partition> parts;
      std::vector<Weight> weights;
      std::string id = "sum(";
      for (std::size_t c = 0; c < lists.size(); ++c) {
        parts.push_back(lists[c][pick[c]].pair.partition);
        weights.push_back(lists[c][pick[c]].pair.weight);
        if (c) id += ",";
        id += std::to_string(c + 1) + ":" + lists[c][pick[c]].id;
      }
      out.push_back({{Partition::select(std::move(parts)), Weight::select(std::move(weights))},
                     id + ")"});
      std::size_t c = 0;
      while (c < pick.size() && ++pick[c] == lists[c].size()) pick[c++] = 0;
      if (c == pick.size()) break;
    }
    out.push_back({{Partition::indiscrete(), Family::sum_indiscrete_weight(*sn)}, "sum()"});
  } else if (const auto* t = f.as<Family::TensorNode>()) {
    auto left = enumerate_members(t->factors[0], limit);
    auto right = enumerate_members(t->factors[1], limit);
    if (!left || !right) return std::nullopt;
    if (left->size() * right->size() > limit) return std::nullopt;
    const std::size_t m1 = t->factors[0].arity();
    const std::size_t m2 = t->factors[1].arity();
    for (const auto& l : *left) {
      for (const auto& r : *right) {
        out.push_back(
            {{Partition::split(m1, l.pair.partition, r.pair.partition),
              Weight::product({Weight::lift(Family::axis_range(0, m1), l.pair.weight),
                               Weight::lift(Family::axis_range(m1, m2), r.pair.weight)})},
             "(" + l.id + ")x(" + r.id + ")"});
      }
    }
  } else if (const auto* u = f.as<Family::UnionNode>()) {
    for (std::size_t k = 0; k < u->parts.size(); ++k) {
      auto l = enumerate_members(u->parts[k], limit);
      if (!l) return std::nullopt;
      for (auto& m : *l) out.push_back({m.pair, "u" + std::to_string(k + 1) + ":" + m.id});
      if (out.size() > limit) return std::nullopt;
    }
  }
  return out;
}

}  // namespace pwnorm
