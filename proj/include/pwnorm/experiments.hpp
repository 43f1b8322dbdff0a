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
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "pwnorm/detail/kernel.hpp"
#include "pwnorm/envelope.hpp"
#include "pwnorm/error.hpp"
#include "pwnorm/family.hpp"
#include "pwnorm/norm.hpp"
#include "pwnorm/sparse_vector.hpp"
#include "pwnorm/spaces.hpp"

namespace pwnorm {

/// Parameters of the lattice witness: base weight w read at first pair
/// coordinates, tolerance eps, per-block first coordinates m and lengths K.
struct YnParams {
  double p = 4.0;
  std::size_t n = 3;
  Weight w = Weight::power_decay(0.25);
  double eps = 1.0;
  std::vector<Coord> m{16, 16, 16};
  std::vector<Coord> K{49, 49, 49};

  /// Throws ValidationError unless w_{m_l} < (eps/n)^{1/2} and
  /// w_{m_l} K_l^{1/2-1/p} > (n/eps)^{1/p} for every l.
  void validate() const {
    detail::require(std::isfinite(p) && p > 2.0, "p must be > 2");
    detail::require(n >= 1 && n <= 16, "n must lie in 1..16");
    detail::require(w.is_scalar(), "w must be one-dimensional");
    detail::require(eps > 0.0 && eps <= 3.0, "eps must lie in (0,3]");
    detail::require(eps <= static_cast<double>(n), "eps must not exceed n");
    detail::require(m.size() == n && K.size() == n, "m and K need n entries each");
    const double small = std::sqrt(eps / static_cast<double>(n));
    const double big = std::pow(static_cast<double>(n) / eps, 1.0 / p);
    for (std::size_t l = 0; l < n; ++l) {
      detail::require(m[l] >= 1 && K[l] >= 1, "m and K entries must be >= 1");
      const double wm = w.at(m[l]);
      detail::require(wm < small, "w at m_" + std::to_string(l + 1) + " = " +
                                      detail::report_number(wm) + " is not below (eps/n)^{1/2} = " +
                                      detail::report_number(small));
      const double lhs = wm * std::pow(static_cast<double>(K[l]), 0.5 - 1.0 / p);
      detail::require(lhs > big, "w_m K^{1/2-1/p} = " + detail::report_number(lhs) +
                                     " at block " + std::to_string(l + 1) +
                                     " is not above (n/eps)^{1/p} = " + detail::report_number(big));
    }
  }

  /// Smallest power of two m and then smallest K meeting both constraints,
  /// the same for every block.
  static YnParams automatic(double p, std::size_t n, Weight w, double eps) {
    detail::require(std::isfinite(p) && p > 2.0, "p must be > 2");
    detail::require(n >= 1, "n must be >= 1");
    detail::require(eps > 0.0, "eps must be > 0");
    const double small = std::sqrt(eps / static_cast<double>(n));
    const double big = std::pow(static_cast<double>(n) / eps, 1.0 / p);
    Coord mm = 1;
    while (!(w.at(mm) < small)) {
      detail::require(mm < (Coord{1} << 62), "no m with w_m below (eps/n)^{1/2}");
      mm *= 2;
    }
    const double wm = w.at(mm);
    const double e = 0.5 - 1.0 / p;
    auto ok = [&](double k) { return wm * std::pow(k, e) > big; };
    double k = std::max(1.0, std::ceil(std::pow(big / wm, 1.0 / e)));
    detail::require(k < 1e12, "required block length is too large");
    while (!ok(k)) k += 1.0;
    while (k > 1.0 && ok(k - 1.0)) k -= 1.0;
    YnParams out;
    out.p = p;
    out.n = n;
    out.w = std::move(w);
    out.eps = eps;
    out.m.assign(n, mm);
    out.K.assign(n, static_cast<Coord>(k));
    out.validate();
    return out;
  }
};

/// n constant blocks on (N^2)^n. Block l (1-based) has coefficient
/// w_{m_l}^{-1} K_l^{-1/2}; pair l runs (m_l, l..l-1+K_l); pair k < l sits at
/// (m_k, K_k + l - 1); pair k > l sits at (m_k, l).
inline SparseVector yn_witness(const YnParams& prm) {
  prm.validate();
  SparseVector x(2 * prm.n);
  for (std::size_t l = 0; l < prm.n; ++l) {
    std::vector<Coord> c(2 * prm.n);
    for (std::size_t k = 0; k < prm.n; ++k) {
      c[2 * k] = prm.m[k];
      if (k < l) c[2 * k + 1] = prm.K[k] + l;
      else c[2 * k + 1] = l + 1;
    }
    const double coef =
        1.0 / (prm.w.at(prm.m[l]) * std::sqrt(static_cast<double>(prm.K[l])));
    x.add_block({Index(std::move(c)), 2 * l + 1, l + 1, l + prm.K[l], coef});
  }
  return x;
}

/// Block number (0-based) of a witness atom or point, from its coordinates.
inline std::size_t yn_block_of(const YnParams& prm, const Index& b) {
  for (std::size_t l = 0; l < prm.n; ++l) {
    bool in = true;
    for (std::size_t k = 0; k < prm.n && in; ++k) {
      if (b[2 * k] != prm.m[k]) in = false;
      else if (k < l) in = b[2 * k + 1] == prm.K[k] + l;
      else if (k == l) in = b[2 * k + 1] >= l + 1 && b[2 * k + 1] <= l + prm.K[l];
      else in = b[2 * k + 1] == l + 1;
    }
    if (in) return l;
  }
  throw ValidationError("point " + b.str() + " is not in the witness");
}

/// Id of the lattice member fixing every pair except `free_pair` (1-based).
inline std::string yn_matched_member(std::size_t n, std::size_t free_pair) {
  std::vector<std::size_t> I;
  for (std::size_t k = 1; k <= n; ++k) {
    if (k != free_pair) I.push_back(k);
  }
  return "I" + subset_str(I);
}

struct LatticeSums {
  std::vector<std::string> ids;
  std::vector<double> values;
};

/// One value per lattice member, in member order; blocks in closed form.
inline LatticeSums yn_sums(const SparseVector& x, const Family& f) {
  const auto* lat = f.as<Family::SubsetLattice>();
  detail::require(lat != nullptr, "yn_sums needs a lattice family");
  detail::validate_vector(x, f);
  const auto atoms = x.atoms();
  LatticeSums out;
  for (const auto& I : lattice_subsets(lat->n)) {
    out.ids.push_back("I" + subset_str(I));
    out.values.push_back(detail::member_norm(atoms, lattice_member(lat->n, I, lat->base), f.p()));
  }
  return out;
}

struct YnReport {
  YnParams params;
  LatticeSums sums;
  double given_norm = 0.0;
  double envelope_lb = 0.0;
  double ratio = 0.0;
  double distance_lb = 0.0;
};

/// Given norm, block-matched envelope bound and certificate for the witness.
inline YnReport yn_report(const YnParams& prm) {
  YnReport r;
  r.params = prm;
  const SparseVector x = yn_witness(prm);
  const Family f = make_Yn(prm.p, prm.n, prm.w);
  r.sums = yn_sums(x, f);
  r.given_norm = *std::max_element(r.sums.values.begin(), r.sums.values.end());
  r.envelope_lb = envelope_lower_bound_atoms(x, f, [&](const Atom& a) {
    return yn_matched_member(prm.n, yn_block_of(prm, a.first) + 1);
  });
  const auto rep = make_report(r.given_norm, r.envelope_lb, "block-matched", false);
  r.ratio = rep.ratio;
  r.distance_lb = rep.distance_lb;
  return r;
}

/// Independent symmetric variable taking +a and -a with probability q/2 each.
struct ThreePoint {
  double a = 0.0;
  double q = 1.0;
};

struct RosenthalResult {
  std::size_t N = 0;
  double p = 0.0;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  double lhs_est = 0.0;
  double stderr_lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  std::vector<std::size_t> rhs_subset;  // variables in the l_p part
};

/// Monte Carlo estimate of (E|sum f_n|^p)^{1/p} against
/// max_Q (sum_{Q} E|f_n|^p + (sum_{not Q} E f_n^2)^{p/2})^{1/p}.
/// Deterministic for a fixed seed, independent of the thread count.
inline RosenthalResult rosenthal_mc(const std::vector<ThreePoint>& vars, double p,
                                    std::uint64_t samples, std::uint64_t seed,
                                    unsigned threads = 0) {
  detail::require(std::isfinite(p) && p > 2.0, "p must be > 2");
  detail::require(!vars.empty() && vars.size() <= 20, "need 1..20 variables");
  detail::require(samples >= 10000, "need at least 10^4 samples");
  bool any = false;
  for (const auto& v : vars) {
    detail::require(std::isfinite(v.a), "amplitudes must be finite");
    detail::require(v.q > 0.0 && v.q <= 1.0, "probabilities must lie in (0,1]");
    any = any || v.a != 0.0;
  }
  detail::require(any, "all amplitudes are zero");

  RosenthalResult r;
  r.N = vars.size();
  r.p = p;
  r.samples = samples;
  r.seed = seed;

  std::vector<double> a2, w2;
  for (const auto& v : vars) {
    a2.push_back(std::abs(v.a) * std::pow(v.q, 1.0 / p));
    w2.push_back(std::pow(v.q, 0.5 - 1.0 / p));
  }
  const auto sub = xp_envelope_subset(a2, w2, p);
  r.rhs = sub.value;
  r.rhs_subset = sub.subset;

  constexpr std::uint64_t kChunk = 1 << 16;
  const std::uint64_t chunks = (samples + kChunk - 1) / kChunk;
  struct Moments {
    detail::CompensatedSum m1, m2;
  };
  auto run_chunk = [&](std::uint64_t c) {
    std::seed_seq sq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                     static_cast<std::uint32_t>(c), static_cast<std::uint32_t>(c >> 32)};
    std::mt19937_64 rng(sq);
    const std::uint64_t count = std::min(kChunk, samples - c * kChunk);
    Moments mo;
    for (std::uint64_t i = 0; i < count; ++i) {
      double s = 0.0;
      for (const auto& v : vars) {
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        if (u < v.q / 2) s += v.a;
        else if (u < v.q) s -= v.a;
      }
      const double x = std::pow(std::abs(s), p);
      mo.m1.add(x);
      mo.m2.add(x * x);
    }
    return mo;
  };
  unsigned t = threads ? threads : std::thread::hardware_concurrency();
  if (t == 0) t = 1;
  std::vector<Moments> per(chunks);
  std::vector<std::future<void>> jobs;
  for (unsigned w = 0; w < t; ++w) {
    jobs.push_back(std::async(std::launch::async, [&, w] {
      for (std::uint64_t c = w; c < chunks; c += t) per[c] = run_chunk(c);
    }));
  }
  for (auto& j : jobs) j.get();
  detail::CompensatedSum m1, m2;
  for (const auto& mo : per) {
    m1.add(mo.m1.value());
    m2.add(mo.m2.value());
  }
  const double n = static_cast<double>(samples);
  const double mean = m1.value() / n;
  const double var = std::max(0.0, (m2.value() / n - mean * mean) * n / (n - 1.0));
  const double se_mean = std::sqrt(var / n);
  detail::require(mean > 0.0, "all sampled sums vanished");
  r.lhs_est = std::pow(mean, 1.0 / p);
  r.stderr_lhs = r.lhs_est / (p * mean) * se_mean;
  r.ratio = r.lhs_est / r.rhs;
  return r;
}

}  // namespace pwnorm
