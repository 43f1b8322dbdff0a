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
#include <future>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include "pwnorm/detail/kernel.hpp"
#include "pwnorm/error.hpp"
#include "pwnorm/family.hpp"
#include "pwnorm/restrict.hpp"
#include "pwnorm/sparse_vector.hpp"

namespace pwnorm {

struct NormResult {
  double value = 0.0;
  std::string argmax_member;
  std::size_t argmax = 0;  // position in the candidate list
  std::size_t candidates_evaluated = 0;
};

/// Point-to-member choice over a sorted support. `choice[j]` indexes
/// `members`.
struct Assignment {
  Support support;
  std::vector<std::uint32_t> choice;
  std::vector<std::string> members;  // ids of the restricted members

  std::string str() const {
    std::string s;
    for (std::size_t j = 0; j < choice.size(); ++j) {
      if (j) s += ' ';
      s += (*support)[j].str() + "->" + members[choice[j]];
    }
    return s;
  }
};

struct EnvelopeResult {
  NormResult norm;
  Assignment witness;
};

namespace detail {

inline void require_p(double p) {
  require(std::isfinite(p) && p > 2.0, "p must be > 2");
}

/// Coefficients of `x` aligned with `support`, zero off supp(x).
inline std::vector<double> align(const SparseVector& x, const std::vector<Index>& support) {
  std::vector<double> out(support.size(), 0.0);
  const auto e = x.expanded();
  for (const auto& en : e.entries()) {
    out[position_in(support, en.index)] = en.coefficient;
  }
  return out;
}

inline Support support_of(const SparseVector& x) {
  require(!x.empty(), "the vector has empty support");
  return make_support(x.support());
}

/// Whether some point of `a` shares a `part` cell with a point of block `b`.
/// `b`'s key must depend on its running coordinate.
inline bool block_meets(const Atom& b, const Atom& a, const Partition& part) {
  const std::size_t r = b.axis;
  if (!a.is_block()) {
    const Coord t = a.first[r];
    return t >= b.lo && t <= b.hi && part.key(a.first) == part.key(b.point(t));
  }
  if (a.axis == r) {
    const Coord lo = std::max(a.lo, b.lo);
    const Coord hi = std::min(a.hi, b.hi);
    if (lo > hi) return false;
    return part.key(a.point(lo)) == part.key(b.point(lo));
  }
  const Coord t = a.first[r];
  if (t < b.lo || t > b.hi) return false;
  Index q = a.first;
  if (part.depends_on(a.first, a.axis)) {
    const Coord u = b.first[a.axis];
    if (u < a.lo || u > a.hi) return false;
    q = a.point(u);
  }
  return part.key(q) == part.key(b.point(t));
}

/// Outer sum (the p-th power of the norm) of a global pair, with constant
/// blocks in closed form where the pair allows it.
inline double member_power_sum(const std::vector<Atom>& atoms, const PairPW& m, double p) {
  std::map<CellKey, CompensatedSum> inner;
  CompensatedSum isolated;  // blocks whose points sit in private cells
  const double half = p / 2.0;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    const Atom& a = atoms[i];
    if (a.is_block() && !m.weight.depends_on(a.first, a.axis)) {
      const double term = weighted_square(a.coefficient, m.weight(a.first));
      const double n = static_cast<double>(a.count());
      if (!m.partition.depends_on(a.first, a.axis)) {
        inner[m.partition.key(a.first)].add(n * term);
        continue;
      }
      bool shared = false;
      for (std::size_t k = 0; k < atoms.size() && !shared; ++k) {
        shared = k != i && block_meets(a, atoms[k], m.partition);
      }
      if (!shared) {
        isolated.add(n * std::pow(check_finite(term), half));
        continue;
      }
    }
    for (Coord t = a.is_block() ? a.lo : 0; t <= (a.is_block() ? a.hi : 0); ++t) {
      const Index b = a.is_block() ? a.point(t) : a.first;
      inner[m.partition.key(b)].add(weighted_square(a.coefficient, m.weight(b)));
    }
  }
  CompensatedSum outer;
  for (const auto& [key, cell] : inner) outer.add(std::pow(check_finite(cell.value()), half));
  outer.add(isolated.value());
  return check_finite(outer.value());
}

inline double member_norm(const std::vector<Atom>& atoms, const PairPW& m, double p) {
  return check_finite(std::pow(member_power_sum(atoms, m, p), 1.0 / p));
}

inline void validate_vector(const SparseVector& x, const Family& f) {
  require(!x.empty(), "the vector has empty support");
  require(x.arity() == f.arity(), "vector arity " + std::to_string(x.arity()) +
                                      " does not match family arity " +
                                      std::to_string(f.arity()));
  for (const auto& a : x.atoms()) {
    f.validate_index(a.first);
    if (a.is_block()) f.validate_index(a.last());
  }
}

inline const Family& strip_envelopes(const Family& f) {
  const Family* g = &f;
  while (const auto* e = g->as<Family::EnvelopeNode>()) g = &e->inner[0];
  return *g;
}

/// Maximizes the refined pair norm over all point-to-member assignments.
/// Ties go to the lexicographically smallest assignment.
inline EnvelopeResult assignment_search(const std::vector<double>& coef, const Support& s,
                                        const std::vector<RestrictedPair>& members,
                                        double p, const Caps& caps) {
  const std::size_t n = s->size();
  const std::size_t k = members.size();
  if (n > caps.envelope_max_support) {
    throw CapacityError("envelope search: support size " + std::to_string(n) +
                        " exceeds the cap of " + std::to_string(caps.envelope_max_support));
  }
  if (k > caps.envelope_max_members) {
    throw CapacityError("envelope search: " + std::to_string(k) +
                        " restricted members exceed the cap of " +
                        std::to_string(caps.envelope_max_members));
  }
  const double total_d = std::pow(static_cast<double>(k), static_cast<double>(n));
  if (total_d > static_cast<double>(caps.max_assignments)) {
    throw CapacityError("envelope search: " + detail::report_number(total_d) +
                        " assignments exceed the cap of " +
                        std::to_string(caps.max_assignments));
  }
  const auto total = static_cast<std::uint64_t>(total_d);

  std::size_t stride = 1;
  for (const auto& m : members) stride = std::max(stride, m.partition.num_cells);
  std::vector<double> terms(k * n);
  std::vector<std::uint32_t> labels(k * n);
  for (std::size_t r = 0; r < k; ++r) {
    for (std::size_t j = 0; j < n; ++j) {
      terms[r * n + j] = weighted_square(coef[j], members[r].weights[j]);
      labels[r * n + j] = static_cast<std::uint32_t>(r * stride) +
                          members[r].partition.labels[j];
    }
  }

  struct Best {
    double value = -1.0;
    std::uint64_t code = 0;
  };
  // Codes put point 0 in the most significant digit, so numeric order is
  // lexicographic order of assignments.
  auto scan = [&](std::uint64_t begin, std::uint64_t end) {
    Best best;
    if (begin >= end) return best;
    std::vector<std::uint32_t> sigma(n);
    std::uint64_t c = begin;
    for (std::size_t j = n; j-- > 0;) {
      sigma[j] = static_cast<std::uint32_t>(c % k);
      c /= k;
    }
    std::vector<std::uint32_t> stamp(k * stride, 0), relabel(k * stride, 0);
    std::uint32_t gen = 0;
    std::vector<double> t(n);
    std::vector<std::uint32_t> lab(n);
    std::vector<CompensatedSum> scratch;
    for (std::uint64_t code = begin; code < end; ++code) {
      ++gen;
      std::uint32_t cells = 0;
      for (std::size_t j = 0; j < n; ++j) {
        const std::size_t at = sigma[j] * n + j;
        const std::uint32_t raw = labels[at];
        if (stamp[raw] != gen) {
          stamp[raw] = gen;
          relabel[raw] = cells++;
        }
        lab[j] = relabel[raw];
        t[j] = terms[at];
      }
      const double v = cell_norm(t, lab, cells, p, scratch);
      if (v > best.value) best = {v, code};
      for (std::size_t j = n; j-- > 0;) {
        if (++sigma[j] < k) break;
        sigma[j] = 0;
      }
    }
    return best;
  };

  unsigned threads = caps.threads ? caps.threads : std::thread::hardware_concurrency();
  if (threads == 0) threads = 1;
  if (total < 4096) threads = 1;
  std::vector<std::future<Best>> parts;
  const std::uint64_t chunk = (total + threads - 1) / threads;
  for (unsigned i = 0; i < threads; ++i) {
    const std::uint64_t b = std::min<std::uint64_t>(total, i * chunk);
    const std::uint64_t e = std::min<std::uint64_t>(total, b + chunk);
    parts.push_back(std::async(threads == 1 ? std::launch::deferred : std::launch::async,
                               scan, b, e));
  }
  Best best;
  for (auto& f : parts) {
    const Best b = f.get();
    if (b.value > best.value || (b.value == best.value && b.code < best.code)) best = b;
  }

  EnvelopeResult out;
  out.witness.support = s;
  out.witness.choice.resize(n);
  std::uint64_t c = best.code;
  for (std::size_t j = n; j-- > 0;) {
    out.witness.choice[j] = static_cast<std::uint32_t>(c % k);
    c /= k;
  }
  for (const auto& m : members) out.witness.members.push_back(m.id);
  out.norm.value = best.value;
  out.norm.candidates_evaluated = static_cast<std::size_t>(total);
  out.norm.argmax_member = "assignment[" + out.witness.str() + "]";
  out.norm.argmax = static_cast<std::size_t>(best.code);
  return out;
}

}  // namespace detail

/// Norm of `x` under a single restricted pair. Points of the pair's support
/// outside supp(x) contribute nothing.
inline double pair_norm(const SparseVector& x, const RestrictedPair& rp, double p) {
  detail::require_p(p);
  const auto coef = detail::align(x, rp.support());
  std::vector<double> terms(coef.size());
  for (std::size_t j = 0; j < coef.size(); ++j) {
    terms[j] = detail::weighted_square(coef[j], rp.weights[j]);
  }
  return detail::cell_norm(terms, rp.partition.labels, rp.partition.num_cells, p);
}

/// Norm of `x` under a global (partition, weight) pair.
inline double pair_norm(const SparseVector& x, const PairPW& pair, double p) {
  detail::require_p(p);
  detail::require(!x.empty(), "the vector has empty support");
  return detail::member_norm(x.atoms(), pair, p);
}

/// Maximum over the restricted pairs.
inline NormResult max_over(const SparseVector& x, const std::vector<RestrictedPair>& pairs,
                           double p) {
  NormResult r;
  r.value = -1.0;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const double v = pair_norm(x, pairs[i], p);
    if (v > r.value) {
      r.value = v;
      r.argmax = i;
      r.argmax_member = pairs[i].id;
    }
  }
  r.candidates_evaluated = pairs.size();
  return r;
}

/// Family norm: the maximum of the member norms. A top-level envelope node is
/// evaluated by assignment search over the members it wraps.
inline NormResult family_norm(const SparseVector& x, const Family& f, const Caps& caps = {}) {
  detail::validate_vector(x, f);
  const double p = f.p();
  if (f.as<Family::EnvelopeNode>()) {
    const Family& g = detail::strip_envelopes(f);
    const Support s = detail::support_of(x);
    const auto members = restrict_family(g, s, caps);
    return detail::assignment_search(detail::align(x, *s), s, members, p, caps).norm;
  }
  if (auto members = enumerate_members(f, caps.max_global_members)) {
    const auto atoms = x.atoms();
    NormResult r;
    r.value = -1.0;
    for (std::size_t i = 0; i < members->size(); ++i) {
      const double v = detail::member_norm(atoms, (*members)[i].pair, p);
      if (v > r.value) {
        r.value = v;
        r.argmax = i;
        r.argmax_member = (*members)[i].id;
      }
    }
    r.candidates_evaluated = members->size();
    return r;
  }
  return max_over(x, restrict_family(f, detail::support_of(x), caps), p);
}

}  // namespace pwnorm
