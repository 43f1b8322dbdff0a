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


// Acceptance run: one PASS/FAIL line per criterion; exit status 1 when any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "pwnorm/pwnorm.hpp"

using namespace pwnorm;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

bool rel_close(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

struct Check {
  bool ok = true;
  std::ostringstream note;

  void expect(bool cond, const std::string& what) {
    if (!cond && ok) note << "first failure: " << what << "; ";
    ok = ok && cond;
  }
};

SparseVector vec1(const std::vector<double>& c) {
  SparseVector x(1);
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i] != 0.0) x.add(Index{static_cast<Coord>(i + 1)}, c[i]);
  }
  return x;
}

SparseVector random_points(std::mt19937_64& rng, std::size_t arity, Coord range,
                           std::size_t count) {
  std::uniform_int_distribution<Coord> coord(1, range);
  std::normal_distribution<double> val(0.0, 1.0);
  SparseVector x(arity);
  std::set<Index> used;
  std::size_t tries = 0;
  while (used.size() < count && tries++ < 100 * count) {
    std::vector<Coord> c(arity);
    for (auto& v : c) v = coord(rng);
    Index b(c);
    if (used.insert(b).second) x.add(b, val(rng));
  }
  return x;
}

Weight random_weight(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> wd(0.05, 1.0);
  return Weight::explicit_values({wd(rng), wd(rng), wd(rng), wd(rng)}, Weight::constant(wd(rng)));
}

// Arity 2, the discrete unit member first, then up to `members - 1` random ones.
Family random_family(std::mt19937_64& rng, double p, std::size_t members, bool unit = true) {
  std::uniform_int_distribution<int> kind(0, 3);
  std::vector<PairPW> pairs;
  if (unit) pairs.push_back({Partition::discrete(), Weight::one()});
  while (pairs.size() < members) {
    const Weight w = random_weight(rng);
    switch (kind(rng)) {
      case 0: pairs.push_back({Partition::indiscrete(), Weight::lift({0}, w)}); break;
      case 1: pairs.push_back({Partition::grouping({0}), Weight::lift({1}, w)}); break;
      case 2: pairs.push_back({Partition::grouping({1}), Weight::lift({0}, w)}); break;
      default: pairs.push_back({Partition::discrete(), Weight::lift({1}, w)}); break;
    }
  }
  return Family::explicit_list(p, 2, std::move(pairs));
}

// Max over every set partition Q of the support and every map T from Q-cells
// to members.
double qt_oracle(const SparseVector& x, const Family& f) {
  const auto s = make_support(x.support());
  const auto members = restrict_family(f, s);
  std::vector<const RestrictedPair*> ptrs;
  for (const auto& m : members) ptrs.push_back(&m);
  const std::size_t k = members.size();
  double best = 0.0;
  for_each_set_partition(s->size(), [&](std::span<const std::uint32_t> q, std::size_t cells) {
    std::vector<std::uint32_t> t(cells, 0);
    std::vector<std::uint32_t> choice(q.size());
    while (true) {
      for (std::size_t j = 0; j < q.size(); ++j) choice[j] = t[q[j]];
      best = std::max(best, pair_norm(x, refine_restricted(s, ptrs, choice, q), f.p()));
      std::size_t d = 0;
      while (d < cells && ++t[d] == k) t[d++] = 0;
      if (d == cells) break;
    }
  });
  return best;
}

// ---------------------------------------------------------------------------

Check criterion1() {
  Check c;
  const auto t0 = Clock::now();
  const auto r = yn_report(YnParams{});
  const double secs = seconds_since(t0);
  const double env = std::pow(3.0, 0.25);
  const double given = std::pow(1.0 + 2.0 * std::pow(0.5 * std::pow(49.0, 0.25), -4.0) / 16.0, 0.25);
  c.expect(rel_close(r.envelope_lb, env, 1e-12), "envelope_lb");
  c.expect(rel_close(r.given_norm, given, 1e-9), "given_norm");
  c.expect(r.ratio >= 1.30, "ratio");
  c.expect(secs < 1.0, "runtime");
  c.note << "envelope_lb=" << fmt(r.envelope_lb) << " (3^{1/4}=" << fmt(env)
         << "), given_norm=" << fmt(r.given_norm) << " (closed form " << fmt(given)
         << "), ratio=" << fmt(r.ratio) << ", " << fmt(secs) << " s";
  return c;
}

// Upper bounds by the number of fixed pairs.
double yn_bound(const YnParams& prm, std::size_t fixed) {
  if (fixed == 0) return std::sqrt(prm.eps);
  if (fixed + 1 == prm.n) return std::pow(prm.eps + 1.0, 1.0 / prm.p);
  return std::pow(prm.eps, 1.0 / prm.p);
}

std::vector<YnParams> criterion2_params() {
  std::mt19937_64 rng(2026);
  std::uniform_int_distribution<std::size_t> nd(2, 4);
  std::uniform_real_distribution<double> ed(0.05, 1.0), pd(4.0, 6.0), ad(0.2, 0.6);
  std::vector<YnParams> out;
  for (int i = 0; i < 100; ++i) {
    out.push_back(YnParams::automatic(pd(rng), nd(rng), Weight::power_decay(ad(rng)), ed(rng)));
  }
  return out;
}

Check criterion2() {
  Check c;
  const auto t0 = Clock::now();
  std::size_t sums = 0;
  double worst_env = 0.0;
  for (const auto& prm : criterion2_params()) {
    const auto r = yn_report(prm);
    const auto subsets = lattice_subsets(prm.n);
    for (std::size_t k = 0; k < subsets.size(); ++k, ++sums) {
      c.expect(r.sums.values[k] < yn_bound(prm, subsets[k].size()),
               "bound for " + r.sums.ids[k] + " at eps=" + fmt(prm.eps));
    }
    const double target = std::pow(static_cast<double>(prm.n), 1.0 / prm.p);
    worst_env = std::max(worst_env, std::abs(r.envelope_lb - target) / target);
    c.expect(rel_close(r.envelope_lb, target, 1e-12), "envelope_lb = n^{1/p}");
  }
  const double secs = seconds_since(t0);
  c.expect(secs < 30.0, "runtime");
  c.note << "100 parameter sets, " << sums << " sums bounded, max rel. envelope error "
         << fmt(worst_env) << ", " << fmt(secs) << " s";
  return c;
}

Check criterion3() {
  Check c;
  const auto t0 = Clock::now();
  std::mt19937_64 rng(33);
  std::uniform_int_distribution<std::size_t> kd(1, 4), sd(1, 10);
  constexpr double kBudget = 2e5;
  int general = 0, largest = 0;
  while (general < 500) {
    const std::size_t k = kd(rng), s = sd(rng);
    if (touchard(s, k) > kBudget) continue;
    const auto f = random_family(rng, 3.0 + static_cast<double>(general % 4), k);
    const auto x = random_points(rng, 2, 4, s);
    const double exact = envelope_norm_exact(x, f).norm.value;
    const double oracle = qt_oracle(x, f);
    c.expect(exact == oracle, "assignment search " + fmt(exact) + " vs (Q,T) " + fmt(oracle));
    largest = std::max(largest, static_cast<int>(x.support_size()));
    ++general;
  }
  std::uniform_real_distribution<double> wd(0.01, 1.0);
  std::normal_distribution<double> val(0.0, 1.0);
  for (int i = 0; i < 500; ++i) {
    const std::size_t n = sd(rng);
    std::vector<double> a(n), w(n);
    for (std::size_t j = 0; j < n; ++j) {
      a[j] = val(rng);
      w[j] = wd(rng);
    }
    const double p = 2.5 + 0.5 * (i % 8);
    const auto f = make_rosenthal_xp(p, Weight::explicit_values(w, Weight::one()));
    const double exact = envelope_norm_exact(vec1(a), f).norm.value;
    const double sub = xp_envelope_subset(a, w, p).value;
    c.expect(exact == sub, "subset search " + fmt(sub) + " vs " + fmt(exact));
  }
  const double secs = seconds_since(t0);
  c.expect(secs < 120.0, "runtime");
  c.note << "500 (Q,T) instances (largest support " << largest
         << "), 500 two-member instances up to 10 points, all bit-identical, " << fmt(secs)
         << " s";
  return c;
}

Check criterion4() {
  Check c;
  const auto f = make_rosenthal_xp(4, Weight::explicit_values({1, 1, 0.01, 0.01}, Weight::one()));
  const auto x = vec1({1, 1, 1, 1});
  const auto r = distortion_certificate(x, f);
  const double given = std::max(std::pow(4.0, 0.25), std::sqrt(2.0002));
  const double env = std::pow(6.0, 0.25);
  const auto sub = xp_envelope_subset({1, 1, 1, 1}, {1, 1, 0.01, 0.01}, 4);
  c.expect(rel_close(r.given_norm, given, 1e-9), "given norm");
  c.expect(rel_close(r.envelope_lb, env, 1e-9), "envelope");
  c.expect(sub.value == r.envelope_lb, "subset oracle");
  c.expect(rel_close(r.distance_lb, std::sqrt(r.ratio), 1e-15), "distance_lb = sqrt(ratio)");
  c.expect(std::abs(r.distance_lb - 1.052) < 5e-4, "distance_lb ~ 1.052");
  c.note << "given=" << fmt(r.given_norm) << ", envelope=" << fmt(r.envelope_lb)
         << ", ratio=" << fmt(r.ratio) << ", distance_lb=" << fmt(r.distance_lb)
         << ", witness " << r.witness;
  return c;
}

struct Child {
  std::size_t arity;
  std::vector<PairPW> members;
  Weight indiscrete;
};

double direct_norm(const std::vector<std::pair<Index, double>>& x,
                   const std::vector<PairPW>& members, double p) {
  double best = 0.0;
  for (const auto& m : members) {
    std::map<CellKey, double> cells;
    for (const auto& [b, v] : x) {
      const double w = m.weight(b);
      cells[m.partition.key(b)] += v * v * w * w;
    }
    double s = 0.0;
    for (const auto& kv : cells) s += std::pow(kv.second, p / 2.0);
    best = std::max(best, std::pow(s, 1.0 / p));
  }
  return best;
}

double sum_oracle(const SparseVector& x, const std::vector<Child>& kids, const Weight& outer,
                  double p) {
  std::vector<std::vector<std::pair<Index, double>>> parts(kids.size());
  for (const auto& e : x.entries()) {
    const std::size_t a = static_cast<std::size_t>(e.index[0]) - 1;
    parts[a].push_back({e.index.slice(1, kids[a].arity), e.coefficient});
  }
  double lp = 0.0, l2 = 0.0;
  for (std::size_t a = 0; a < kids.size(); ++a) {
    if (parts[a].empty()) continue;
    lp += std::pow(direct_norm(parts[a], kids[a].members, p), p);
    const double W = outer.at(static_cast<Coord>(a + 1));
    for (const auto& [b, v] : parts[a]) {
      const double u = kids[a].indiscrete(b);
      l2 += W * W * v * v * u * u;
    }
  }
  return std::max(std::pow(lp, 1.0 / p), std::sqrt(l2));
}

Child random_child(std::mt19937_64& rng) {
  if (std::uniform_int_distribution<int>(0, 1)(rng) == 0) {
    const Weight v = random_weight(rng);
    return {1, {{Partition::discrete(), Weight::one()}, {Partition::indiscrete(), v}}, v};
  }
  const Weight a = random_weight(rng), b = random_weight(rng);
  const Weight v = Weight::product({Weight::lift({0}, a), Weight::lift({1}, b)});
  return {2,
          {{Partition::indiscrete(), v},
           {Partition::grouping({0}), Weight::lift({1}, b)},
           {Partition::grouping({1}), Weight::lift({0}, a)},
           {Partition::discrete(), Weight::one()}},
          v};
}

Check criterion5() {
  Check c;
  std::mt19937_64 rng(55);
  std::uniform_int_distribution<std::size_t> nk(1, 4), npts(1, 8);
  std::uniform_int_distribution<Coord> coord(1, 3);
  std::normal_distribution<double> val(0.0, 1.0);
  std::uniform_real_distribution<double> wd(0.1, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t k = nk(rng);
    const double p = 2.5 + 0.5 * (trial % 6);
    std::vector<Child> kids;
    std::vector<Family> fams;
    std::size_t width = 0;
    for (std::size_t a = 0; a < k; ++a) {
      kids.push_back(random_child(rng));
      fams.push_back(Family::explicit_list(p, kids.back().arity, kids.back().members));
      width = std::max(width, kids.back().arity);
    }
    std::vector<double> ws(k);
    for (auto& v : ws) v = wd(rng);
    const Weight outer = Weight::explicit_values(ws, Weight::one());
    const auto f = p2w_sum(fams, outer);
    SparseVector x(1 + width);
    std::set<Index> used;
    const std::size_t count = npts(rng);
    for (std::size_t i = 0; i < count; ++i) {
      const auto a = std::uniform_int_distribution<std::size_t>(1, k)(rng);
      std::vector<Coord> cc(1 + width, 1);
      cc[0] = static_cast<Coord>(a);
      for (std::size_t j = 0; j < kids[a - 1].arity; ++j) cc[1 + j] = coord(rng);
      Index b(cc);
      if (used.insert(b).second) x.add(b, val(rng));
    }
    const double got = family_norm(x, f).value;
    const double want = sum_oracle(x, kids, outer, p);
    worst = std::max(worst, std::abs(got - want) / want);
    c.expect(rel_close(got, want, 1e-12), "sum norm " + fmt(got) + " vs " + fmt(want));
  }
  c.note << "200 random vectors over 1-4 children, max rel. difference " << fmt(worst);
  return c;
}

Check criterion6() {
  Check c;
  const auto xp = make_rosenthal_xp(4, Weight::constant(0.5));
  const auto v = has_envelope_property(xp, {Index{1}, Index{2}});
  c.expect(!v.holds && v.exhaustive && v.q.has_value(), "X_p counterexample");
  c.note << "X_p on 2 points: " << v.str() << "; ";

  const auto env = Family::envelope(xp);
  const auto env_power = Family::envelope(make_rosenthal_xp(4, Weight::power_decay(0.5)));
  std::uint64_t checks = 0;
  for (const auto& e : {env, env_power}) {
    for (Coord s = 1; s <= 4; ++s) {
      for (Coord start : {1, 3}) {
        std::vector<Index> pts;
        for (Coord i = 0; i < s; ++i) pts.push_back(Index{start + 2 * i});
        const auto r = has_envelope_property(e, pts);
        c.expect(r.holds && r.exhaustive, "envelope node on " + std::to_string(s) + " points");
        checks += r.checks;
      }
    }
  }
  c.note << "envelope nodes closed on supports of size 1-4 (" << checks << " refinements); ";

  // Children closed on the base support, lifted into each branch.
  const auto kids = make_admissible(make_lp(4));
  std::uint64_t sum_checks = 0;
  const auto sum = p2w_sum({env, env_power, Family::envelope(kids)}, Weight::one());
  for (Coord branch = 1; branch <= 3; ++branch) {
    for (Coord s = 1; s <= 4; ++s) {
      std::vector<Index> base, lifted;
      for (Coord i = 1; i <= s; ++i) {
        base.push_back(Index{i});
        lifted.push_back(Index{branch, i});
      }
      const Family& child = sum.as<Family::SumNode>()->children[branch - 1];
      c.expect(has_envelope_property(child, base).holds, "child closed");
      const auto r = has_envelope_property(sum, lifted);
      c.expect(r.holds && r.exhaustive,
               "sum on lifted support of size " + std::to_string(s) + ": " + r.str());
      sum_checks += r.checks;
    }
  }
  c.note << "sum with outer weight 1 closed on lifted supports of size 1-4 (" << sum_checks
         << " refinements)";
  return c;
}

Check criterion7() {
  Check c;
  const std::pair<Weight, IsoType> rosenthal[] = {
      {Weight::constant(0.5), IsoType::kL2},
      {Weight::power_decay(1), IsoType::kLp},
      {Weight::interleave(Weight::constant(0.9), Weight::power_decay(1)), IsoType::kL2PlusLp},
      {Weight::power_decay(0.25), IsoType::kXp},
  };
  for (const auto& [w, want] : rosenthal) {
    const auto got = classify_rosenthal(w, 4).type;
    c.expect(got == want, w.str() + " -> " + to_string(got));
    c.note << w.str() << " -> " << to_string(got) << "; ";
  }
  using Sizes = SizeProfile::Sizes;
  const std::pair<SizeProfile, IsoType> single[] = {
      {profile_of(Partition::discrete(), 1), IsoType::kLp},
      {profile_of(Partition::indiscrete(), 1), IsoType::kL2},
      {SizeProfile{Count::finite(1), Sizes::kSingletons, 1, Count::many()}, IsoType::kL2PlusLp},
      {profile_of(Partition::grouping({0}), 2), IsoType::kSumL2Lp},
  };
  for (const auto& [prof, want] : single) {
    const auto got = classify_single(prof).type;
    c.expect(got == want, "single partition -> " + to_string(got));
    c.note << to_string(got) << (want == IsoType::kSumL2Lp ? "" : ", ");
  }
  return c;
}

Check criterion8() {
  Check c;
  const auto t0 = Clock::now();
  std::mt19937_64 rng(88);
  const std::vector<Family> fams{
      make_Yn(4, 2, Weight::power_decay(0.3)),
      make_schechtman(5, Weight::power_decay(0.2), Weight::geometric(0.9)),
      make_admissible(random_family(rng, 3.5, 3)),
      p2w_sum({make_rosenthal_xp(4, Weight::constant(0.4)),
               make_rosenthal_xp(4, Weight::power_decay(0.5))},
              Weight::constant(0.8)),
  };
  int uncond = 0, tri = 0, lower = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const Family& f = fams[static_cast<std::size_t>(trial) % fams.size()];
    const std::size_t ar = f.arity();
    const Coord range = (ar == 4 || f.as<Family::SumNode>()) ? 2 : 3;
    auto x = random_points(rng, ar, range, 1 + static_cast<std::size_t>(trial % 6));
    auto y = random_points(rng, ar, range, 1 + static_cast<std::size_t>(trial % 5));
    const double nx = family_norm(x, f).value;
    SparseVector flipped(ar);
    std::uint64_t signs = rng();
    for (const auto& e : x.entries()) {
      flipped.add(e.index, (signs & 1U) ? -e.coefficient : e.coefficient);
      signs >>= 1;
    }
    c.expect(family_norm(flipped, f).value == nx, "unconditionality");
    ++uncond;
    std::map<Index, double> sum;
    for (const auto& e : x.entries()) sum[e.index] += e.coefficient;
    for (const auto& e : y.entries()) sum[e.index] += e.coefficient;
    SparseVector z(ar);
    for (const auto& [b, v] : sum) {
      if (v != 0.0) z.add(b, v);
    }
    if (!z.empty()) {
      c.expect(family_norm(z, f).value <= (nx + family_norm(y, f).value) * (1 + 1e-9),
               "triangle inequality");
      ++tri;
    }
    c.expect(nx >= pair_norm(x, PairPW{Partition::discrete(), Weight::one()}, f.p()),
             "lower l_p bound");
    ++lower;
  }
  const auto F = make_rosenthal_xp(4, Weight::power_decay(0.25));
  const auto G = make_schechtman(4, Weight::geometric(0.8), Weight::constant(0.5));
  const auto T = tensor_family(F, G);
  int tensors = 0;
  for (int trial = 0; trial < 1000; ++trial, ++tensors) {
    const auto u = random_points(rng, 1, 6, 1 + static_cast<std::size_t>(trial % 4));
    const auto v = random_points(rng, 2, 3, 1 + static_cast<std::size_t>(trial % 3));
    SparseVector uv(3);
    for (const auto& a : u.entries()) {
      for (const auto& b : v.entries()) uv.add(a.index.concat(b.index), a.coefficient * b.coefficient);
    }
    c.expect(rel_close(family_norm(uv, T).value,
                       family_norm(u, F).value * family_norm(v, G).value, 1e-9),
             "tensor multiplicativity");
  }
  int idem = 0;
  for (int trial = 0; trial < 1000; ++trial, ++idem) {
    const auto base = random_family(rng, 4, 1 + static_cast<std::size_t>(trial % 3), trial % 2);
    const auto once = make_admissible(base);
    const auto twice = make_admissible(once);
    c.expect(once.admissible() && twice.str() == once.str(), "idempotence (structure)");
    const auto x = random_points(rng, 2, 3, 1 + static_cast<std::size_t>(trial % 5));
    c.expect(family_norm(x, twice).value == family_norm(x, once).value, "idempotence (norm)");
    c.expect(family_norm(x, once).value >= family_norm(x, base).value, "monotone");
  }
  const double secs = seconds_since(t0);
  c.expect(secs < 60.0, "runtime");
  c.note << uncond << " sign flips, " << tri << " triangles, " << lower << " lower bounds, "
         << tensors << " elementary tensors, " << idem << " idempotence cases, " << fmt(secs)
         << " s";
  return c;
}

Check criterion9() {
  Check c;
  const auto t0 = Clock::now();
  const std::vector<ThreePoint> vars(10, ThreePoint{1.0, 1.0});
  const auto r = rosenthal_mc(vars, 4, 1000000, 20261019);
  const auto again = rosenthal_mc(vars, 4, 1000000, 20261019, 1);
  const double secs = seconds_since(t0);
  const double lhs = std::pow(280.0, 0.25);
  const double z = std::abs(r.lhs_est - lhs) / r.stderr_lhs;
  c.expect(z < 3.0, "lhs within 3 standard errors");
  c.expect(r.rhs == std::sqrt(10.0), "rhs = 10^{1/2}");
  c.expect(r.ratio >= 1.25 && r.ratio <= 1.34, "ratio band");
  c.expect(again.lhs_est == r.lhs_est && again.stderr_lhs == r.stderr_lhs, "determinism");
  c.expect(secs < 30.0, "runtime");
  c.note << "lhs_est=" << fmt(r.lhs_est) << " +- " << fmt(r.stderr_lhs) << " (" << fmt(z)
         << " SE from 280^{1/4}), rhs=" << fmt(r.rhs) << ", ratio=" << fmt(r.ratio)
         << ", two runs identical, " << fmt(secs) << " s";
  return c;
}

Check criterion10() {
  Check c;
  const auto t0 = Clock::now();
  std::size_t cases = 0, points = 0;
  double worst = 0.0;
  auto compare = [&](double a, double b, const std::string& what) {
    worst = std::max(worst, std::abs(a - b) / std::max(std::abs(a), std::abs(b)));
    c.expect(rel_close(a, b, 1e-12), what + ": " + fmt(a) + " vs " + fmt(b));
  };
  std::vector<YnParams> all{YnParams{}};
  for (const auto& prm : criterion2_params()) all.push_back(prm);
  for (const auto& prm : all) {
    const auto f = make_Yn(prm.p, prm.n, prm.w);
    const auto x = yn_witness(prm);
    const auto e = x.expanded();
    const auto r = yn_report(prm);
    const auto sums = yn_sums(e, f);
    for (std::size_t k = 0; k < sums.values.size(); ++k) {
      compare(sums.values[k], r.sums.values[k], "sum " + sums.ids[k]);
    }
    compare(family_norm(e, f).value, r.given_norm, "given norm");
    const double env = envelope_lower_bound_atoms(e, f, [&](const Atom& a) {
      return yn_matched_member(prm.n, yn_block_of(prm, a.first) + 1);
    });
    compare(env, r.envelope_lb, "envelope bound");
    ++cases;
    points += e.support_size();
  }
  const double secs = seconds_since(t0);
  c.note << cases << " witnesses (" << points << " expanded points), max rel. difference "
         << fmt(worst) << ", " << fmt(secs) << " s";
  return c;
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Check()>> criteria[] = {
      {"Y_3 golden experiment", criterion1},
      {"lattice inequality suite", criterion2},
      {"envelope oracle equivalence", criterion3},
      {"X_p gap example", criterion4},
      {"sum formula oracle", criterion5},
      {"envelope-property decisions", criterion6},
      {"classification tables", criterion7},
      {"norm axioms and structure", criterion8},
      {"Rosenthal Monte Carlo", criterion9},
      {"compressed-representation equivalence", criterion10},
  };
  int failed = 0;
  int id = 0;
  for (const auto& [name, fn] : criteria) {
    ++id;
    Check c;
    try {
      c = fn();
    } catch (const std::exception& e) {
      c.ok = false;
      c.note << "exception: " << e.what();
    }
    std::printf("%s %d %s: %s\n", c.ok ? "PASS" : "FAIL", id, name, c.note.str().c_str());
    std::fflush(stdout);
    if (!c.ok) ++failed;
  }
  return failed ? 1 : 0;
}
