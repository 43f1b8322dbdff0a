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
#include <functional>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "pwnorm/detail/kernel.hpp"
#include "pwnorm/error.hpp"
#include "pwnorm/family.hpp"
#include "pwnorm/norm.hpp"
#include "pwnorm/restrict.hpp"
#include "pwnorm/sparse_vector.hpp"

namespace pwnorm {

/// Glues the members chosen per cell of `q`: cells are q-cells intersected
/// with the chosen member's cells, weights come from the chosen member.
inline RestrictedPair refine(const RestrictedPartition& q,
                             const std::vector<RestrictedPair>& chosen) {
  detail::require(chosen.size() == q.num_cells, "refine needs one member per cell");
  std::vector<const RestrictedPair*> ptrs;
  for (const auto& m : chosen) {
    detail::require(m.support() == *q.support, "refine: member restricted to another support");
    ptrs.push_back(&m);
  }
  return refine_restricted(q.support, ptrs, q.labels, q.labels);
}

inline RestrictedPair refine(const RestrictedPartition& q, const std::vector<PairPW>& chosen) {
  std::vector<RestrictedPair> r;
  for (const auto& m : chosen) r.push_back(restrict_pair(m, q.support));
  return refine(q, r);
}

struct PropertyOptions {
  /// Random (Q,T) draws used when the exhaustive check exceeds its caps;
  /// 0 turns sampling off.
  std::uint64_t samples = 0;
  std::uint64_t seed = 1;
};

struct PropertyVerdict {
  bool holds = true;
  bool exhaustive = true;  // false: sampled, a "holds" verdict is probabilistic
  std::uint64_t checks = 0;
  std::optional<RestrictedPartition> q;  // counterexample
  std::vector<std::string> t;            // member ids per q-cell
  std::optional<RestrictedPair> refined;

  std::string str() const {
    std::string s = holds ? "holds" : "fails";
    s += exhaustive ? " (exhaustive" : " (sampled";
    s += ", " + std::to_string(checks) + " refinements)";
    if (!holds) {
      s += ": Q=" + q->str() + " T=[";
      for (std::size_t i = 0; i < t.size(); ++i) s += (i ? "," : "") + t[i];
      s += "]";
    }
    return s;
  }
};

/// Decides whether the family restricted to `support` is closed under
/// refinement. Refining along a partition with k cells is a chain of k - 1
/// refinements along two-cell partitions, so the exhaustive check only visits
/// partitions with at most two cells.
inline PropertyVerdict has_envelope_property(const Family& f, const Support& support,
                                             const Caps& caps = {},
                                             const PropertyOptions& opt = {}) {
  const auto members = restrict_family(f, support, caps);
  const std::size_t s = support->size();
  const std::size_t k = members.size();
  PairDedup present;
  for (const auto& m : members) present.insert(m);
  std::vector<const RestrictedPair*> ptrs;
  for (const auto& m : members) ptrs.push_back(&m);

  PropertyVerdict v;
  auto test = [&](std::span<const std::uint32_t> q, std::span<const std::uint32_t> t) {
    ++v.checks;
    std::vector<std::uint32_t> choice(s);
    for (std::size_t j = 0; j < s; ++j) choice[j] = t[q[j]];
    auto rp = refine_restricted(support, ptrs, choice, q);
    if (present.insert(rp)) {
      v.holds = false;
      v.q = RestrictedPartition::from_labels(support, {q.begin(), q.end()});
      for (auto c : t) v.t.push_back(members[c].id);
      v.refined = std::move(rp);
      return false;
    }
    return true;
  };

  const double two_cell = s >= 1 ? std::ldexp(1.0, static_cast<int>(s) - 1) - 1.0 : 0.0;
  const double work = static_cast<double>(k) + two_cell * static_cast<double>(k) *
                                                   static_cast<double>(k);
  const bool fits = s <= caps.property_max_support &&
                    work <= static_cast<double>(caps.property_max_checks);
  if (fits) {
    std::vector<std::uint32_t> q(s, 0), t(2, 0);
    for (std::uint32_t a = 0; a < k; ++a) {
      t[0] = a;
      if (!test(q, std::span<const std::uint32_t>(t).first(1))) return v;
    }
    // Two-cell partitions: point 0 in cell 0, a nonempty subset of the rest in cell 1.
    for (std::uint64_t mask = 1; s > 1 && mask < (std::uint64_t{1} << (s - 1)); ++mask) {
      for (std::size_t j = 1; j < s; ++j) q[j] = (mask >> (j - 1)) & 1U;
      for (std::uint32_t a = 0; a < k; ++a) {
        for (std::uint32_t b = 0; b < k; ++b) {
          t[0] = a;
          t[1] = b;
          if (!test(q, t)) return v;
        }
      }
    }
    return v;
  }
  if (opt.samples == 0) {
    throw CapacityError("envelope property: support size " + std::to_string(s) + " with " +
                        std::to_string(k) +
                        " members exceeds the exhaustive caps; enable sampling");
  }
  v.exhaustive = false;
  std::mt19937_64 rng(opt.seed);
  std::uniform_int_distribution<std::size_t> cell(0, s - 1);
  std::uniform_int_distribution<std::uint32_t> pick(0, static_cast<std::uint32_t>(k - 1));
  for (std::uint64_t i = 0; i < opt.samples; ++i) {
    std::vector<std::uint32_t> q(s);
    for (auto& l : q) l = static_cast<std::uint32_t>(cell(rng));
    const std::size_t cells = detail::canonicalize(q);
    std::vector<std::uint32_t> t(cells);
    for (auto& c : t) c = pick(rng);
    if (!test(q, t)) return v;
  }
  return v;
}

inline PropertyVerdict has_envelope_property(const Family& f, std::vector<Index> support,
                                             const Caps& caps = {},
                                             const PropertyOptions& opt = {}) {
  return has_envelope_property(f, make_support(std::move(support)), caps, opt);
}

/// Envelope norm by search over point-to-member assignments, with the
/// maximizing assignment.
inline EnvelopeResult envelope_norm_exact(const SparseVector& x, const Family& f,
                                          const Caps& caps = {}) {
  detail::validate_vector(x, f);
  const Family& g = detail::strip_envelopes(f);
  const Support s = detail::support_of(x);
  const auto members = restrict_family(g, s, caps);
  return detail::assignment_search(detail::align(x, *s), s, members, f.p(), caps);
}

struct SubsetResult {
  double value = 0.0;
  std::vector<std::size_t> subset;  // 0-based positions that take the l_p part
};

namespace detail {

class SubsetEvaluator {
 public:
  SubsetEvaluator(const std::vector<double>& a, const std::vector<double>& w, double p)
      : a_(a), w_(w), p_(p), terms_(a.size()), labels_(a.size()) {
    require(a.size() == w.size(), "coefficient and weight lists differ in length");
    require(!a.empty(), "empty coefficient list");
    require_p(p);
    for (double x : w) require(x > 0.0 && x <= 1.0, "weight outside (0,1]: " + exact_number(x));
  }

  /// in_q[j]: point j sits alone with weight 1, otherwise it joins the common
  /// weighted cell.
  double operator()(const std::vector<char>& in_q) {
    std::uint32_t cells = 0;
    std::uint32_t common = UINT32_MAX;
    for (std::size_t j = 0; j < a_.size(); ++j) {
      if (in_q[j]) {
        labels_[j] = cells++;
        terms_[j] = weighted_square(a_[j], 1.0);
      } else {
        if (common == UINT32_MAX) common = cells++;
        labels_[j] = common;
        terms_[j] = weighted_square(a_[j], w_[j]);
      }
    }
    return cell_norm(terms_, labels_, cells, p_, scratch_);
  }

 private:
  const std::vector<double>& a_;
  const std::vector<double>& w_;
  double p_;
  std::vector<double> terms_;
  std::vector<std::uint32_t> labels_;
  std::vector<CompensatedSum> scratch_;
};

inline SubsetResult to_result(double v, const std::vector<char>& in_q) {
  SubsetResult r;
  r.value = v;
  for (std::size_t j = 0; j < in_q.size(); ++j) {
    if (in_q[j]) r.subset.push_back(j);
  }
  return r;
}

}  // namespace detail

/// max over subsets q of (sum_{q} |a|^p + (sum_{not q} a^2 w^2)^{p/2})^{1/p},
/// by enumeration. Bit-identical to envelope_norm_exact on the two-member
/// family {(discrete, 1), (indiscrete, w)} over points listed in order.
inline SubsetResult xp_envelope_subset(const std::vector<double>& a, const std::vector<double>& w,
                                       double p, const Caps& caps = {}) {
  if (a.size() > caps.subset_max_length) {
    throw CapacityError("subset search: length " + std::to_string(a.size()) +
                        " exceeds the cap of " + std::to_string(caps.subset_max_length));
  }
  detail::SubsetEvaluator eval(a, w, p);
  const std::size_t n = a.size();
  std::vector<char> in_q(n, 0), best_q;
  double best = -1.0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    for (std::size_t j = 0; j < n; ++j) in_q[j] = (mask >> j) & 1U;
    const double v = eval(in_q);
    if (v > best) {
      best = v;
      best_q = in_q;
    }
  }
  return detail::to_result(best, best_q);
}

/// Heuristic: ranks coordinates by |a|^{p-2}/w^2 and tries the n + 1 leading
/// prefixes. Always a lower bound for xp_envelope_subset.
inline SubsetResult xp_envelope_threshold(const std::vector<double>& a,
                                          const std::vector<double>& w, double p) {
  detail::SubsetEvaluator eval(a, w, p);
  const std::size_t n = a.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> score(n);
  for (std::size_t j = 0; j < n; ++j) {
    score[j] = std::pow(std::abs(a[j]), p - 2.0) / (w[j] * w[j]);
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return score[x] > score[y]; });
  std::vector<char> in_q(n, 0), best_q = in_q;
  double best = eval(in_q);
  for (std::size_t k = 0; k < n; ++k) {
    in_q[order[k]] = 1;
    const double v = eval(in_q);
    if (v > best) {
      best = v;
      best_q = in_q;
    }
  }
  return detail::to_result(best, best_q);
}

/// Builds an assignment on supp(x) by asking `choose` for a member id per
/// point; ids refer to the members of `f` (envelopes stripped) restricted to
/// supp(x).
inline Assignment make_assignment(const SparseVector& x, const Family& f,
                                  const std::function<std::string(const Index&)>& choose,
                                  const Caps& caps = {}) {
  detail::validate_vector(x, f);
  const Support s = detail::support_of(x);
  const auto members = restrict_family(detail::strip_envelopes(f), s, caps);
  Assignment out;
  out.support = s;
  for (const auto& m : members) out.members.push_back(m.id);
  for (const auto& b : *s) {
    const std::string id = choose(b);
    auto it = std::find(out.members.begin(), out.members.end(), id);
    detail::require(it != out.members.end(),
                    "member " + id + " is not among the restricted members");
    out.choice.push_back(static_cast<std::uint32_t>(it - out.members.begin()));
  }
  return out;
}

/// Norm of `x` under the refinement induced by `sigma`; a lower bound for the
/// envelope norm.
inline double envelope_lower_bound(const SparseVector& x, const Family& f,
                                   const Assignment& sigma, const Caps& caps = {}) {
  detail::validate_vector(x, f);
  const Support s = detail::support_of(x);
  detail::require(sigma.support && *sigma.support == *s,
                  "assignment is not defined on supp(x)");
  detail::require(sigma.choice.size() == s->size(), "assignment is not total on supp(x)");
  const auto members = restrict_family(detail::strip_envelopes(f), s, caps);
  std::vector<const RestrictedPair*> ptrs;
  std::vector<std::uint32_t> remap;
  for (const auto& id : sigma.members) {
    auto it = std::find_if(members.begin(), members.end(),
                           [&](const RestrictedPair& m) { return m.id == id; });
    detail::require(it != members.end(), "member " + id + " is not among the restricted members");
    remap.push_back(static_cast<std::uint32_t>(ptrs.size()));
    ptrs.push_back(&*it);
  }
  std::vector<std::uint32_t> choice(s->size());
  for (std::size_t j = 0; j < s->size(); ++j) {
    detail::require(sigma.choice[j] < remap.size(), "assignment names an unknown member");
    choice[j] = remap[sigma.choice[j]];
  }
  return pair_norm(x, refine_restricted(s, ptrs, choice), f.p());
}

/// Lower bound from an assignment that is constant on each entry and block of
/// `x`: `choose` maps an atom to a global member id. Blocks are evaluated in
/// closed form.
inline double envelope_lower_bound_atoms(const SparseVector& x, const Family& f,
                                         const std::function<std::string(const Atom&)>& choose,
                                         const Caps& caps = {}) {
  detail::validate_vector(x, f);
  const auto members = enumerate_members(detail::strip_envelopes(f), caps.max_global_members);
  if (!members) throw CapacityError("family has too many members for atom assignment");
  std::vector<std::vector<Atom>> groups(members->size());
  for (const auto& a : x.atoms()) {
    const std::string id = choose(a);
    auto it = std::find_if(members->begin(), members->end(),
                           [&](const GlobalMember& m) { return m.id == id; });
    detail::require(it != members->end(), "member " + id + " is not a member of the family");
    groups[static_cast<std::size_t>(it - members->begin())].push_back(a);
  }
  detail::CompensatedSum outer;
  for (std::size_t i = 0; i < groups.size(); ++i) {
    if (!groups[i].empty()) outer.add(detail::member_power_sum(groups[i], (*members)[i].pair, f.p()));
  }
  return detail::check_finite(std::pow(outer.value(), 1.0 / f.p()));
}

struct DistortionReport {
  double given_norm = 0.0;
  double envelope_lb = 0.0;
  double ratio = 0.0;
  double distance_lb = 0.0;
  bool exact_envelope = false;  // envelope_lb is the envelope norm itself
  std::string witness;
};

inline DistortionReport make_report(double given, double envelope, std::string witness,
                                    bool exact) {
  detail::require(given > 0.0, "distortion needs a nonzero vector");
  DistortionReport r;
  r.given_norm = given;
  r.envelope_lb = envelope;
  r.ratio = envelope / given;
  r.distance_lb = std::sqrt(r.ratio);
  r.exact_envelope = exact;
  r.witness = std::move(witness);
  return r;
}

/// Certificate from the exact envelope norm.
inline DistortionReport distortion_certificate(const SparseVector& x, const Family& f,
                                               const Caps& caps = {}) {
  const Family& g = detail::strip_envelopes(f);
  const double given = family_norm(x, g, caps).value;
  const auto env = envelope_norm_exact(x, g, caps);
  return make_report(given, env.norm.value, env.witness.str(), true);
}

/// Certificate from a chosen assignment.
inline DistortionReport distortion_certificate(const SparseVector& x, const Family& f,
                                               const Assignment& sigma,
                                               const Caps& caps = {}) {
  const Family& g = detail::strip_envelopes(f);
  const double given = family_norm(x, g, caps).value;
  return make_report(given, envelope_lower_bound(x, g, sigma, caps), sigma.str(), false);
}

}  // namespace pwnorm
