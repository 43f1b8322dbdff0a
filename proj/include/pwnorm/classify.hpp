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
#include <string>
#include <vector>

#include "pwnorm/error.hpp"
#include "pwnorm/partition.hpp"
#include "pwnorm/weight.hpp"

namespace pwnorm {

enum class IsoType { kLp, kL2, kL2PlusLp, kSumL2Lp, kXp, kUnknown };

inline std::string to_string(IsoType t) {
  switch (t) {
    case IsoType::kLp:
      return "l_p";
    case IsoType::kL2:
      return "l_2";
    case IsoType::kL2PlusLp:
      return "l_2+l_p";
    case IsoType::kSumL2Lp:
      return "(sum l_2)_p";
    case IsoType::kXp:
      return "X_p";
    case IsoType::kUnknown:
      return "Unknown";
  }
  return "Unknown";
}

struct Classification {
  IsoType type = IsoType::kUnknown;
  std::string reason;
};

/// Answers about the tail of a one-dimensional weight sequence (w_n):
/// inf w_n > 0; sum w_n^{2p/(p-2)} < inf; and, for every eps > 0, the sum over
/// w_n < eps diverges.
struct TailQueries {
  bool inf_positive = false;
  bool power_sum_finite = false;
  bool star = false;
};

namespace detail {

/// Asymptotic class of one interleaved component.
struct TailPart {
  enum Kind { kBounded, kPower, kGeometric } kind = kBounded;
  double alpha = 0.0;  // kPower: w_n ~ n^-alpha
};

inline TailPart combine_product(TailPart a, TailPart b) {
  if (a.kind == TailPart::kGeometric || b.kind == TailPart::kGeometric) {
    return {TailPart::kGeometric, 0.0};
  }
  if (a.kind == TailPart::kBounded) return b;
  if (b.kind == TailPart::kBounded) return a;
  return {TailPart::kPower, a.alpha + b.alpha};
}

inline TailPart combine_min(TailPart a, TailPart b) {
  if (a.kind == TailPart::kGeometric || b.kind == TailPart::kGeometric) {
    return {TailPart::kGeometric, 0.0};
  }
  if (a.kind == TailPart::kBounded) return b;
  if (b.kind == TailPart::kBounded) return a;
  return {TailPart::kPower, std::max(a.alpha, b.alpha)};
}

template <class F>
std::vector<TailPart> zip_parts(const std::vector<TailPart>& a, const std::vector<TailPart>& b,
                                F&& op) {
  std::vector<TailPart> out;
  if (a.size() == 1 || b.size() == 1 || a.size() == b.size()) {
    const std::size_t n = std::max(a.size(), b.size());
    for (std::size_t i = 0; i < n; ++i) {
      out.push_back(op(a[a.size() == 1 ? 0 : i], b[b.size() == 1 ? 0 : i]));
    }
    return out;
  }
  throw UndecidableError("cannot align interleaved components of different shapes");
}

/// Components of the tail, one per interleaved subsequence.
inline std::vector<TailPart> tail_parts(const Weight& w) {
  switch (w.kind()) {
    case Weight::Kind::kOne:
    case Weight::Kind::kConstant:
      return {{TailPart::kBounded, 0.0}};
    case Weight::Kind::kPowerDecay:
      return {{TailPart::kPower, w.parameter()}};
    case Weight::Kind::kGeometric:
      return {{TailPart::kGeometric, 0.0}};
    case Weight::Kind::kExplicit:
      return tail_parts(w.children()[0]);
    case Weight::Kind::kInterleave: {
      auto out = tail_parts(w.children()[0]);
      const auto odd = tail_parts(w.children()[1]);
      out.insert(out.end(), odd.begin(), odd.end());
      return out;
    }
    case Weight::Kind::kProduct:
    case Weight::Kind::kMin: {
      const bool product = w.kind() == Weight::Kind::kProduct;
      auto acc = tail_parts(w.children()[0]);
      for (std::size_t i = 1; i < w.children().size(); ++i) {
        acc = zip_parts(acc, tail_parts(w.children()[i]),
                        product ? combine_product : combine_min);
      }
      return acc;
    }
    case Weight::Kind::kLift:
    case Weight::Kind::kSelect:
      break;
  }
  throw UndecidableError("weight " + w.str() + " is not a one-dimensional sequence");
}

}  // namespace detail

inline TailQueries tail_queries(const Weight& w, double p) {
  detail::require(p > 2.0, "p must be > 2");
  const auto parts = detail::tail_parts(w);
  const double e = 2.0 * p / (p - 2.0);
  TailQueries q{true, true, false};
  for (const auto& t : parts) {
    const bool bounded = t.kind == detail::TailPart::kBounded;
    const bool summable =
        t.kind == detail::TailPart::kGeometric || (t.kind == detail::TailPart::kPower && t.alpha * e > 1.0);
    q.inf_positive = q.inf_positive && bounded;
    q.power_sum_finite = q.power_sum_finite && summable;
    q.star = q.star || (!bounded && !summable);
  }
  return q;
}

/// Isomorphism type of the space normed by max(l_p, w-weighted l_2).
inline Classification classify_rosenthal(const Weight& w, double p) {
  std::vector<detail::TailPart> parts;
  try {
    parts = detail::tail_parts(w);
  } catch (const UndecidableError& e) {
    return {IsoType::kUnknown, e.what()};
  }
  const auto q = tail_queries(w, p);
  if (q.inf_positive) return {IsoType::kL2, "inf w_n > 0"};
  if (q.power_sum_finite) return {IsoType::kLp, "sum w_n^{2p/(p-2)} finite"};
  if (!q.star) {
    return {IsoType::kL2PlusLp,
            "w splits into a part bounded below and a part with finite power sum"};
  }
  return {IsoType::kXp, "sum over w_n < eps of w_n^{2p/(p-2)} diverges for every eps"};
}

/// Cardinality 0, a finite k >= 1, or countably infinite.
struct Count {
  bool infinite = false;
  std::uint64_t k = 0;

  static Count none() { return {false, 0}; }
  static Count finite(std::uint64_t k) { return {false, k}; }
  static Count many() { return {true, 0}; }
  bool zero() const { return !infinite && k == 0; }

  friend Count operator+(Count a, Count b) {
    if (a.infinite || b.infinite) return many();
    return finite(a.k + b.k);
  }
  friend Count operator*(Count a, Count b) {
    if (a.zero() || b.zero()) return none();
    if (a.infinite || b.infinite) return many();
    return finite(a.k * b.k);
  }
};

/// Shape of the pieces of one partition of an infinite index set.
struct SizeProfile {
  enum class Sizes { kNone, kSingletons, kBounded, kUnbounded };

  Count infinite_pieces;
  Sizes finite_sizes = Sizes::kNone;
  std::uint64_t size_bound = 0;  // kBounded only
  Count finite_pieces;
};

inline void validate_profile(const SizeProfile& s) {
  using Sizes = SizeProfile::Sizes;
  detail::require(!s.infinite_pieces.zero() || !s.finite_pieces.zero(), "profile has no pieces");
  detail::require((s.finite_sizes == Sizes::kNone) == s.finite_pieces.zero(),
          "finite piece sizes must be 'none' exactly when there are no finite pieces");
  detail::require(s.finite_sizes != Sizes::kBounded || s.size_bound >= 1, "size bound must be >= 1");
  detail::require(s.finite_sizes != Sizes::kUnbounded || s.finite_pieces.infinite,
          "unbounded piece sizes need infinitely many finite pieces");
  detail::require(!s.infinite_pieces.zero() || s.finite_pieces.infinite,
          "finitely many finite pieces cannot cover an infinite index set");
}

/// Isomorphism type of the space normed by one partition (with weights
/// bounded away from zero on each piece).
inline Classification classify_single(const SizeProfile& s) {
  validate_profile(s);
  using Sizes = SizeProfile::Sizes;
  if (s.infinite_pieces.infinite) {
    return {IsoType::kSumL2Lp, "infinitely many infinite pieces"};
  }
  if (s.finite_sizes == Sizes::kUnbounded) {
    return {IsoType::kSumL2Lp, "finite pieces of unbounded size"};
  }
  if (s.infinite_pieces.zero()) return {IsoType::kLp, "infinitely many pieces of bounded size"};
  if (!s.finite_pieces.infinite) return {IsoType::kL2, "finitely many pieces, some infinite"};
  return {IsoType::kL2PlusLp,
          "finitely many infinite pieces and infinitely many bounded pieces"};
}

namespace detail {

inline SizeProfile profile_sum(const SizeProfile& a, const SizeProfile& b) {
  using Sizes = SizeProfile::Sizes;
  SizeProfile out;
  out.infinite_pieces = a.infinite_pieces + b.infinite_pieces;
  out.finite_pieces = a.finite_pieces + b.finite_pieces;
  out.finite_sizes = std::max(a.finite_sizes, b.finite_sizes);
  out.size_bound = std::max(a.size_bound, b.size_bound);
  if (out.finite_sizes == Sizes::kBounded && out.size_bound == 0) out.size_bound = 1;
  return out;
}

inline SizeProfile profile_product(const SizeProfile& a, const SizeProfile& b) {
  using Sizes = SizeProfile::Sizes;
  SizeProfile out;
  out.infinite_pieces = a.infinite_pieces * (b.infinite_pieces + b.finite_pieces) +
                        a.finite_pieces * b.infinite_pieces;
  out.finite_pieces = a.finite_pieces * b.finite_pieces;
  if (out.finite_pieces.zero()) {
    out.finite_sizes = Sizes::kNone;
  } else if (a.finite_sizes == Sizes::kUnbounded || b.finite_sizes == Sizes::kUnbounded) {
    out.finite_sizes = Sizes::kUnbounded;
  } else if (a.finite_sizes == Sizes::kSingletons && b.finite_sizes == Sizes::kSingletons) {
    out.finite_sizes = Sizes::kSingletons;
  } else {
    out.finite_sizes = Sizes::kBounded;
    out.size_bound = std::max<std::uint64_t>(a.size_bound, 1) * std::max<std::uint64_t>(b.size_bound, 1);
  }
  return out;
}

}  // namespace detail

/// Piece profile of a partition descriptor on N^arity.
inline SizeProfile profile_of(const Partition& part, std::size_t arity) {
  using Sizes = SizeProfile::Sizes;
  detail::require(arity >= 1, "arity must be >= 1");
  const SizeProfile singletons{Count::none(), Sizes::kSingletons, 1, Count::many()};
  const SizeProfile one_infinite{Count::finite(1), Sizes::kNone, 0, Count::none()};
  const SizeProfile many_infinite{Count::many(), Sizes::kNone, 0, Count::none()};
  switch (part.kind()) {
    case Partition::Kind::kDiscrete:
      return singletons;
    case Partition::Kind::kIndiscrete:
      return one_infinite;
    case Partition::Kind::kGrouping: {
      for (auto a : part.axes()) detail::require(a < arity, "grouping axis beyond the arity");
      if (part.axes().empty()) return one_infinite;
      if (part.axes().size() == arity) return singletons;
      return many_infinite;
    }
    case Partition::Kind::kPairGrouping: {
      detail::require(arity % 2 == 0, "pair grouping needs an even arity");
      for (auto k : part.axes()) detail::require(2 * k <= arity, "pair number beyond the arity");
      if (part.axes().empty()) return one_infinite;
      if (part.axes().size() == arity / 2) return singletons;
      return many_infinite;
    }
    case Partition::Kind::kSelect: {
      // Branch a covers {a} x N^{arity-1}; tags beyond the branch list are
      // not part of the index set.
      detail::require(arity >= 2, "select needs arity >= 2");
      SizeProfile acc = profile_of(part.children()[0], arity - 1);
      for (std::size_t i = 1; i < part.children().size(); ++i) {
        acc = detail::profile_sum(acc, profile_of(part.children()[i], arity - 1));
      }
      return acc;
    }
    case Partition::Kind::kSplit: {
      const std::size_t m = part.split_at();
      detail::require(m >= 1 && m < arity, "split point must lie inside the arity");
      return detail::profile_product(profile_of(part.children()[0], m),
                                     profile_of(part.children()[1], arity - m));
    }
  }
  throw UndecidableError("no profile for partition " + part.str());
}

}  // namespace pwnorm
