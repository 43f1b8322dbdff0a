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

#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "pwnorm/norm.hpp"
#include "pwnorm/spaces.hpp"

using namespace pwnorm;
using Catch::Matchers::WithinRel;

namespace {

SparseVector vec1(const std::vector<double>& c) {
  SparseVector x(1);
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i] != 0.0) x.add(Index{static_cast<Coord>(i + 1)}, c[i]);
  }
  return x;
}

SparseVector random_vector(std::mt19937_64& rng, std::size_t arity, Coord range, int count) {
  std::uniform_int_distribution<Coord> coord(1, range);
  std::normal_distribution<double> val(0.0, 1.0);
  SparseVector x(arity);
  std::set<Index> used;
  for (int i = 0; i < count; ++i) {
    std::vector<Coord> c(arity);
    for (auto& v : c) v = coord(rng);
    Index b(c);
    if (used.insert(b).second) x.add(b, val(rng));
  }
  return x;
}

}  // namespace

TEST_CASE("pair_norm examples") {
  const auto s = make_support({Index{1}, Index{2}, Index{3}});
  auto x = vec1({1, 1});
  CHECK_THAT(pair_norm(x, PairPW{Partition::discrete(), Weight::one()}, 4),
             WithinRel(std::pow(2.0, 0.25), 1e-15));
  CHECK_THAT(pair_norm(x, PairPW{Partition::indiscrete(), Weight::constant(0.5)}, 4),
             WithinRel(std::sqrt(0.5), 1e-15));
  // Cells {1,2},{3}: ((9+16)^2 + 4^2)^{1/4} = 641^{1/4}.
  RestrictedPair rp;
  rp.partition = RestrictedPartition::from_labels(s, {0, 0, 1});
  rp.weights = {1, 1, 1};
  CHECK_THAT(pair_norm(vec1({3, 4, 2}), rp, 4), WithinRel(std::pow(641.0, 0.25), 1e-15));
  CHECK_THROWS_AS(pair_norm(vec1({1, 0, 0, 1}), rp, 4), ValidationError);
}

TEST_CASE("family_norm examples") {
  const auto xp = make_rosenthal_xp(4, Weight::constant(0.5));
  const auto r = family_norm(vec1({1, 1}), xp);
  CHECK_THAT(r.value, WithinRel(std::pow(2.0, 0.25), 1e-15));
  CHECK(r.argmax_member == "m1");
  CHECK(family_norm(vec1({0, 0, -1}), xp).value == 1.0);
  CHECK_THAT(family_norm(vec1({3, 4}), make_l2(4, Weight::one())).value, WithinRel(5.0, 1e-15));
  SparseVector u(2);
  u.add(Index{1, 1}, 1.0).add(Index{2, 1}, 1.0);
  CHECK_THAT(family_norm(u, make_sum_l2_lp(4, Weight::one())).value,
             WithinRel(std::pow(2.0, 0.25), 1e-15));
  CHECK_THROWS_AS(family_norm(SparseVector(1), xp), ValidationError);
  CHECK_THROWS_AS(make_rosenthal_xp(2, Weight::one()), ValidationError);
}

TEST_CASE("blocks evaluate like their expansion") {
  std::mt19937_64 rng(11);
  const auto fams = {make_Yn(4, 2, Weight::power_decay(0.3)),
                     make_schechtman(5, Weight::power_decay(0.2), Weight::geometric(0.9)),
                     Family::explicit_list(3, 4, {{Partition::grouping({0, 3}), Weight::lift({1}, Weight::power_decay(0.5))},
                                                  {Partition::discrete(), Weight::one()}})};
  for (const auto& f : fams) {
    for (int trial = 0; trial < 200; ++trial) {
      SparseVector x(f.arity());
      std::uniform_int_distribution<Coord> coord(1, 3);
      std::uniform_int_distribution<std::size_t> ax(0, f.arity() - 1);
      std::normal_distribution<double> val(0.0, 1.0);
      for (int k = 0; k < 4; ++k) {
        std::vector<Coord> c(f.arity());
        for (auto& v : c) v = coord(rng);
        const std::size_t a = ax(rng);
        const Coord lo = coord(rng);
        try {
          x.add_block({Index(c), a, lo, lo + coord(rng), val(rng)});
        } catch (const ValidationError&) {
        }
        try {
          for (auto& v : c) v = coord(rng);
          x.add(Index(c), val(rng));
        } catch (const ValidationError&) {
        }
      }
      if (x.empty()) continue;
      const double compressed = family_norm(x, f).value;
      const double expanded = family_norm(x.expanded(), f).value;
      const double restricted = max_over(x, restrict_family(f, x.support()), f.p()).value;
      CHECK_THAT(compressed, WithinRel(expanded, 1e-12));
      CHECK_THAT(compressed, WithinRel(restricted, 1e-12));
    }
  }
}

TEST_CASE("norm axioms on random vectors") {
  std::mt19937_64 rng(5);
  const auto f = make_Yn(4.5, 2, Weight::power_decay(0.25));
  for (int trial = 0; trial < 200; ++trial) {
    const auto x = random_vector(rng, 4, 3, 6);
    const auto y = random_vector(rng, 4, 3, 6);
    const double nx = family_norm(x, f).value;
    // Sign flips.
    SparseVector flipped(4);
    for (const auto& e : x.entries()) flipped.add(e.index, (e.index[0] % 2 ? -1 : 1) * e.coefficient);
    CHECK(family_norm(flipped, f).value == nx);
    // Homogeneity.
    SparseVector scaled(4);
    for (const auto& e : x.entries()) scaled.add(e.index, -2.5 * e.coefficient);
    CHECK_THAT(family_norm(scaled, f).value, WithinRel(2.5 * nx, 1e-12));
    // Triangle inequality.
    std::map<Index, double> sum;
    for (const auto& e : x.entries()) sum[e.index] += e.coefficient;
    for (const auto& e : y.entries()) sum[e.index] += e.coefficient;
    SparseVector z(4);
    for (const auto& [b, v] : sum) {
      if (v != 0.0) z.add(b, v);
    }
    if (!z.empty()) {
      CHECK(family_norm(z, f).value <= (nx + family_norm(y, f).value) * (1 + 1e-9));
    }
    // Lower l_p bound from the discrete member.
    CHECK(nx >= pair_norm(x, PairPW{Partition::discrete(), Weight::one()}, f.p()));
  }
}

TEST_CASE("tensor of elementary vectors multiplies") {
  std::mt19937_64 rng(9);
  const auto F = make_rosenthal_xp(4, Weight::power_decay(0.25));
  const auto G = make_rosenthal_xp(4, Weight::geometric(0.8));
  const auto T = tensor_family(F, G);
  for (int trial = 0; trial < 100; ++trial) {
    const auto u = random_vector(rng, 1, 6, 4);
    const auto v = random_vector(rng, 1, 6, 4);
    SparseVector uv(2);
    for (const auto& a : u.entries()) {
      for (const auto& b : v.entries()) uv.add(a.index.concat(b.index), a.coefficient * b.coefficient);
    }
    CHECK_THAT(family_norm(uv, T).value,
               WithinRel(family_norm(u, F).value * family_norm(v, G).value, 1e-9));
  }
}

TEST_CASE("tensor of two Rosenthal families is the four-member family") {
  const auto w = Weight::power_decay(0.25);
  const auto w2 = Weight::geometric(0.7);
  const auto T = tensor_family(make_rosenthal_xp(4, w), make_rosenthal_xp(4, w2));
  const auto S = make_schechtman(4, w, w2);
  std::vector<Index> pts;
  for (Coord i = 1; i <= 3; ++i) {
    for (Coord j = 1; j <= 3; ++j) pts.push_back(Index{i, j});
  }
  const auto a = restrict_family(T, pts);
  const auto b = restrict_family(S, pts);
  REQUIRE(a.size() == 4);
  REQUIRE(b.size() == 4);
  for (const auto& x : a) {
    CHECK(std::any_of(b.begin(), b.end(), [&](const RestrictedPair& y) { return x.same_structure(y); }));
  }
  CHECK(T.admissible());
  SparseVector e(2);
  e.add(Index{2, 3}, 1.0);
  CHECK(family_norm(e, T).value == 1.0);
}

TEST_CASE("adding members never lowers the norm") {
  std::mt19937_64 rng(3);
  const auto base = make_sum_l2_lp(4, Weight::power_decay(0.5));
  const auto adm = make_admissible(base);
  CHECK(adm.admissible());
  CHECK(restrict_family(adm, {Index{1, 1}, Index{1, 2}, Index{2, 1}}).size() == 3);
  const auto again = make_admissible(adm);
  for (int trial = 0; trial < 100; ++trial) {
    const auto x = random_vector(rng, 2, 4, 5);
    const double before = family_norm(x, base).value;
    const double after = family_norm(x, adm).value;
    CHECK(after >= before);
    CHECK(family_norm(x, again).value == after);
  }
}
