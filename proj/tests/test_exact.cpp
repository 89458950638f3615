#include <doctest.h>

#include "helpers.hpp"
#include "tap/exact.hpp"
#include "tap/lp.hpp"

using namespace tap;
using namespace test_helpers;

TEST_CASE("exact TAP on the star is 2") {
  auto res = exact_tap(TapInstance::make(star3()));
  REQUIRE(res.feasible());
  CHECK(*res.optimum == 2);
  CHECK(res.witness.chosen.size() == 2);
}

TEST_CASE("single-link path costs its link") {
  InstanceData d = make_data("a b c", "a-b b-c", "a-c:5");
  auto res = exact_tap(TapInstance::make(d));
  REQUIRE(res.feasible());
  CHECK(*res.optimum == 5);
}

TEST_CASE("uncoverable edge means infeasible") {
  InstanceData d = make_data("a b c", "a-b b-c", "b-c:1");
  CHECK_FALSE(exact_tap(TapInstance::make(d)).feasible());
}

TEST_CASE("oracle bound raises") {
  OracleOptions opts;
  opts.max_links = 3;
  TapInstance inst = TapInstance::make(gen_random_binary(8, 3, 1, 5, 4));
  CHECK_THROWS_AS(exact_tap(inst, opts), Error);
}

TEST_CASE("branch and bound equals exhaustive search") {
  for (int i = 0; i < 15; ++i) {
    TapInstance inst =
        TapInstance::make(gen_random_binary(8 + 2 * (i % 3), derive_seed(111, i), 1, 9, 4));
    OracleOptions exhaustive;
    exhaustive.exhaustive_links = 40;
    OracleOptions bnb;
    bnb.exhaustive_links = 0;  // force the LP-bounded path
    auto a = exact_tap(inst, exhaustive);
    auto b = exact_tap(inst, bnb);
    REQUIRE(a.feasible());
    REQUIRE(b.feasible());
    CHECK(*a.optimum == *b.optimum);
  }
}

TEST_CASE("exact optimum dominates every LP relaxation") {
  for (int i = 0; i < 8; ++i) {
    TapInstance inst = TapInstance::make(gen_random_binary(10, derive_seed(121, i), 1, 9, 3));
    auto res = exact_tap(inst);
    REQUIRE(res.feasible());
    auto lp_e = build_lp(inst, LpModel::edge);
    Rat lp_opt = lp_value(lp_e, solve_lp(lp_e));
    CHECK(lp_opt <= *res.optimum);
    // Known global bound: the integrality gap never exceeds 2.
    CHECK(*res.optimum <= 2 * lp_opt);
  }
}

TEST_CASE("exact 3TAP on the star is 2") {
  ThreeTapInstance tt = ThreeTapInstance::make(star3(), false);
  auto res = exact_3tap(tt);
  REQUIRE(res.feasible());
  CHECK(*res.optimum == 2);
}

TEST_CASE("3TAP infeasible when no common neighbor exists") {
  // Bare path, no links: edge a-b has no candidate midpoint.
  InstanceData d = make_data("a b c", "a-b b-c", "");
  ThreeTapInstance tt = ThreeTapInstance::make(d, false);
  CHECK_FALSE(exact_3tap(tt).feasible());
}

TEST_CASE("exact set cover basics") {
  SetCoverInstance sc;
  sc.num_elements = 2;
  sc.sets.push_back({"S1", {0, 1}, Rat(1)});
  sc.sets.push_back({"S2", {1}, Rat(1)});
  auto res = exact_set_cover(sc);
  REQUIRE(res.feasible());
  CHECK(*res.optimum == 1);
  CHECK(res.chosen_sets == std::vector<int>{0});

  SetCoverInstance single;
  single.num_elements = 3;
  single.sets.push_back({"S", {0, 1, 2}, Rat(7)});
  CHECK(*exact_set_cover(single).optimum == 7);

  SetCoverInstance gap;
  gap.num_elements = 2;
  gap.sets.push_back({"S", {0}, Rat(1)});
  CHECK_FALSE(exact_set_cover(gap).feasible());
}

TEST_CASE("set cover bound raises") {
  SetCoverInstance sc;
  sc.num_elements = 1;
  for (int i = 0; i < 25; ++i) sc.sets.push_back({"S", {0}, Rat(1)});
  CHECK_THROWS_AS(exact_set_cover(sc), Error);
}

TEST_CASE("witnesses are re-checked feasible") {
  for (int i = 0; i < 10; ++i) {
    TapInstance inst = TapInstance::make(gen_random_binary(10, derive_seed(131, i), 1, 9, 4));
    auto res = exact_tap(inst);
    REQUIRE(res.feasible());
    CHECK(is_feasible_cover(inst, res.witness));
    CHECK(cost_of(inst, res.witness) == *res.optimum);
  }
}
