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

#include <random>

#include "pwnorm/classify.hpp"
#include "pwnorm/family.hpp"
#include "pwnorm/restrict.hpp"
#include "pwnorm/sparse_vector.hpp"
#include "pwnorm/spaces.hpp"

using namespace pwnorm;

TEST_CASE("index rejects zero coordinates") {
  CHECK_THROWS_AS(Index({1, 0}), ValidationError);
  const Index b{3, 1, 2};
  CHECK(b.with(1, 7) == Index{3, 7, 2});
  CHECK(b.slice(1, 2) == Index{1, 2});
  CHECK(b.str() == "(3,1,2)");
}

TEST_CASE("weights evaluate and validate") {
  CHECK_THROWS_AS(Weight::constant(1.5), ValidationError);
  CHECK_THROWS_WITH(Weight::constant(1.5), Catch::Matchers::ContainsSubstring("weight outside (0,1]"));
  CHECK_THROWS_AS(Weight::constant(0.0), ValidationError);
  CHECK(Weight::power_decay(0.25).at(16) == 0.5);
  CHECK(Weight::power_decay(2).at(1) == 1.0);
  CHECK(Weight::geometric(0.5).at(3) == 0.125);
  const auto e = Weight::explicit_values({0.3, 0.2}, Weight::constant(0.9));
  CHECK(e.at(1) == 0.3);
  CHECK(e.at(2) == 0.2);
  CHECK(e.at(5) == 0.9);
  const auto il = Weight::interleave(Weight::constant(0.9), Weight::power_decay(1));
  CHECK(il.at(4) == 0.9);
  CHECK(il.at(5) == Catch::Approx(1.0 / 3.0));
  const auto lifted = Weight::lift({2}, Weight::power_decay(1));
  CHECK(lifted(Index{7, 7, 4}) == 0.25);
  CHECK(lifted.depends_on(Index{7, 7, 4}, 2));
  CHECK_FALSE(lifted.depends_on(Index{7, 7, 4}, 0));
}

TEST_CASE("partition keys") {
  const auto g = Partition::grouping({0});
  CHECK(g.key(Index{1, 5}) == g.key(Index{1, 9}));
  CHECK(g.key(Index{1, 5}) != g.key(Index{2, 5}));
  CHECK(Partition::discrete().is_discrete(3));
  CHECK(Partition::grouping({}).is_indiscrete());
  CHECK(Partition::pair_grouping({1, 2}).is_discrete(4));
  CHECK_FALSE(Partition::pair_grouping({1}).is_discrete(4));
}

TEST_CASE("sparse vector blocks") {
  SparseVector x(2);
  x.add(Index{1, 1}, 2.0);
  x.add_block({Index{2, 1}, 1, 1, 3, 0.5});
  CHECK(x.support_size() == 4);
  CHECK_THROWS_AS(x.add(Index{2, 2}, 1.0), ValidationError);
  CHECK_THROWS_AS(x.add(Index{1, 1}, 1.0), ValidationError);
  CHECK_THROWS_AS(x.add_block({Index{1, 1}, 0, 1, 2, 1.0}), ValidationError);
  CHECK_THROWS_AS(x.add(Index{3, 1}, 0.0), ValidationError);
  const auto s = x.support();
  REQUIRE(s.size() == 4);
  CHECK(s[0] == Index{1, 1});
  CHECK(s[3] == Index{2, 3});
}

TEST_CASE("restrict_pair examples") {
  auto rp = restrict_pair({Partition::discrete(), Weight::one()}, {Index{1}, Index{2}});
  CHECK(rp.partition.num_cells == 2);
  CHECK(rp.weights == std::vector<double>{1.0, 1.0});

  rp = restrict_pair({Partition::indiscrete(), Weight::one()}, {Index{1}, Index{2}, Index{3}});
  CHECK(rp.partition.num_cells == 1);

  // Points sharing pair 1 group together.
  const Index a{1, 1, 2, 1, 3, 1}, b{1, 2, 2, 1, 3, 1}, c{1, 1, 2, 2, 3, 1};
  rp = restrict_pair({Partition::pair_grouping({1}), Weight::one()}, {a, b, c});
  CHECK(rp.partition.num_cells == 2);
  // Sorted support: a, c, b.
  CHECK(rp.support()[0] == a);
  CHECK(rp.support()[1] == c);
  CHECK(rp.partition.labels == std::vector<std::uint32_t>{0, 0, 1});
}

TEST_CASE("restrict_pair is compatible with sub-supports") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<Coord> coord(1, 4);
  const auto pair = PairPW{Partition::grouping({0}), Weight::power_decay(0.5)};
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Index> pts;
    for (int i = 0; i < 8; ++i) pts.push_back(Index{coord(rng), coord(rng)});
    const auto big = restrict_pair(pair, pts);
    std::vector<Index> sub(big.support().begin(), big.support().begin() + big.support().size() / 2 + 1);
    const auto small = restrict_pair(pair, sub);
    std::vector<std::uint32_t> projected(big.partition.labels.begin(),
                                         big.partition.labels.begin() + static_cast<long>(sub.size()));
    detail::canonicalize(projected);
    CHECK(projected == small.partition.labels);
    for (std::size_t j = 0; j < sub.size(); ++j) CHECK(small.weights[j] == big.weights[j]);
  }
}

TEST_CASE("restrict_family counts") {
  const auto xp = make_rosenthal_xp(4, Weight::constant(0.5));
  CHECK(restrict_family(xp, {Index{1}, Index{2}, Index{5}}).size() == 2);

  // All eight lattice members share the single-point cell; distinct weights survive.
  const auto yn = make_Yn(4, 3, Weight::power_decay(0.25));
  const auto one_point = restrict_family(yn, {Index{16, 1, 2, 1, 1, 1}});
  // Weights: products over unfixed pairs of w(16)=0.5, w(2)=2^{-1/4}, w(1)=1.
  std::set<double> distinct;
  const double w1 = 0.5, w2 = std::pow(2.0, -0.25), w3 = 1.0;
  for (const auto& I : subsets_by_size(3)) {
    double v = 1.0;
    const double ws[] = {w1, w2, w3};
    for (std::size_t k = 1; k <= 3; ++k) {
      if (std::find(I.begin(), I.end(), k) == I.end()) v *= ws[k - 1];
    }
    distinct.insert(v);
  }
  CHECK(one_point.size() == distinct.size());

  // A sum on a support inside child 1: |I_1| + 1.
  const auto child = Family::explicit_list(
      4, 1, {{Partition::discrete(), Weight::one()}, {Partition::indiscrete(), Weight::constant(0.5)}});
  const auto sum = p2w_sum({child, child}, Weight::constant(0.5));
  CHECK(restrict_family(sum, {Index{1, 1}, Index{1, 2}}).size() == 3);
  // With outer weight 1 the global member coincides with the child's own
  // indiscrete member and is deduplicated.
  CHECK(restrict_family(p2w_sum({child, child}, Weight::one()), {Index{1, 1}, Index{1, 2}}).size() == 2);
  CHECK_THROWS_AS(restrict_family(sum, {Index{3, 1}}), ValidationError);
}

TEST_CASE("restriction caps raise capacity errors") {
  const auto xp = make_rosenthal_xp(4, Weight::constant(0.5));
  Caps caps;
  caps.max_restricted_pairs = 10;
  std::vector<Index> pts;
  for (Coord i = 1; i <= 6; ++i) pts.push_back(Index{i});
  CHECK_THROWS_AS(restrict_family(Family::envelope(xp), pts, caps), CapacityError);
}

TEST_CASE("set partitions enumerate Bell numbers") {
  const std::size_t bell[] = {1, 1, 2, 5, 15, 52, 203};
  for (std::size_t s = 1; s <= 6; ++s) {
    std::size_t count = 0;
    for_each_set_partition(s, [&](auto, std::size_t) { ++count; });
    CHECK(count == bell[s]);
    CHECK(touchard(s, 1) == static_cast<double>(bell[s]));
  }
}

TEST_CASE("symbolic tail queries") {
  auto q = tail_queries(Weight::power_decay(0.25), 4);
  CHECK_FALSE(q.inf_positive);
  CHECK_FALSE(q.power_sum_finite);
  CHECK(q.star);
  q = tail_queries(Weight::constant(0.5), 4);
  CHECK(q.inf_positive);
  q = tail_queries(Weight::power_decay(1), 4);
  CHECK(q.power_sum_finite);
  CHECK_FALSE(q.star);
  q = tail_queries(Weight::explicit_values({0.1, 0.2}, Weight::power_decay(1)), 4);
  CHECK(q.power_sum_finite);
  CHECK_THROWS_AS(tail_queries(Weight::lift({1}, Weight::one()), 4), UndecidableError);
}

TEST_CASE("tail queries agree with truncated sums") {
  // Truncated sums of w^{2p/(p-2)} grow without bound exactly when not summable.
  for (double alpha : {0.1, 0.25, 0.5, 1.0}) {
    const auto w = Weight::power_decay(alpha);
    const auto q = tail_queries(w, 4);
    double s1 = 0, s2 = 0;
    for (Coord n = 1; n <= 1000; ++n) s1 += std::pow(w.at(n), 4);
    s2 = s1;
    for (Coord n = 1001; n <= 100000; ++n) s2 += std::pow(w.at(n), 4);
    CHECK(q.power_sum_finite == (s2 - s1 < 0.1));
  }
}
