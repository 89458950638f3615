#include <doctest.h>

#include "helpers.hpp"
#include "tap/exact.hpp"
#include "tap/lp.hpp"
#include "tap/reduce.hpp"

using namespace tap;
using namespace test_helpers;

TEST_CASE("binarize leaves a single edge alone") {
  InstanceData d = make_data("a b", "a-b", "a-b:1");
  Reduction red = binarize(TapInstance::make(d));
  CHECK(red.instance.node_count() == 2);
  CHECK(red.instance.edge_count() == 1);
  CHECK(red.map.dummy_links.empty());
  CHECK(red.instance.link_count() == 1);
}

TEST_CASE("binarize turns a node with three children into the chain gadget") {
  // r on top so v0 keeps a parent edge; v0 then has children v1,v2,v3.
  InstanceData d = make_data("r v0 v1 v2 v3", "r-v0 v0-v1 v0-v2 v0-v3", "v1-v2:1 v2-v3:1 r-v1:1",
                             "r");
  Reduction red = binarize(TapInstance::make(d));
  const TapInstance& t = red.instance;
  // Five dummies for v0 (v0' plus the chain of four) and one dummy link.
  CHECK(t.node_count() == 10);
  CHECK(red.map.dummy_links.size() == 1);
  CHECK(t.is_binary());
  CHECK(t.links_leaf_to_leaf());
  // The dummy link runs from v0 to the chain tail and covers the new chain.
  const Link& dummy = t.link(red.map.dummy_links[0]);
  CHECK(t.node_name(dummy.u) == "v0");
  CHECK(dummy.cost == 0);
  CHECK(t.degree(t.node_id("v0")) == 1);
}

TEST_CASE("binarize makes the star center a leaf with four dummies") {
  Reduction red = binarize(TapInstance::make(star3()));
  const TapInstance& t = red.instance;
  CHECK(t.node_count() == 8);  // 4 originals + 4 dummies
  CHECK(red.map.dummy_links.size() == 1);
  CHECK(t.is_binary());
  CHECK(t.links_leaf_to_leaf());
  CHECK(t.degree(t.node_id("c")) == 1);
}

TEST_CASE("binarize output is always binary with leaf links") {
  for (int n : {5, 7, 9, 12}) {
    for (int i = 0; i < 3; ++i) {
      InstanceData d = i == 0 ? gen_star(n - 1) : gen_caterpillar(n, derive_seed(3, n * 7 + i));
      Reduction red = binarize(TapInstance::make(d));
      CHECK(red.instance.is_binary());
      CHECK(red.instance.links_leaf_to_leaf());
      // Size stays linear in the original.
      CHECK(red.instance.node_count() <= 4 * static_cast<int>(d.nodes.size()));
    }
  }
}

TEST_CASE("push and lift preserve feasibility and cost") {
  for (int i = 0; i < 100; ++i) {
    int n = 5 + (i % 6);
    InstanceData d = gen_caterpillar(std::max(5, n), derive_seed(41, i), 1, 6);
    TapInstance inst = TapInstance::make(d);
    Reduction red = binarize(inst);
    Rng rng(derive_seed(42, i));
    IntegralSolution a = random_feasible_cover(inst, rng);
    IntegralSolution pushed = push_solution(inst, red.instance, red.map, a);
    CHECK(is_feasible_cover(red.instance, pushed));
    CHECK(cost_of(red.instance, pushed) == cost_of(inst, a));
    IntegralSolution back = lift_solution(inst, red.instance, red.map, pushed);
    CHECK(back.chosen == a.chosen);
    CHECK(cost_of(inst, back) == cost_of(inst, a));
  }
}

TEST_CASE("push rejects infeasible input; lift rejects a missing dummy") {
  TapInstance inst = TapInstance::make(star3());
  Reduction red = binarize(inst);
  CHECK_THROWS_AS(push_solution(inst, red.instance, red.map, IntegralSolution{}), Error);

  IntegralSolution a;
  a.add(0);
  a.add(1);
  IntegralSolution pushed = push_solution(inst, red.instance, red.map, a);
  IntegralSolution broken;
  for (int l : pushed.chosen) {
    if (l != red.map.dummy_links[0]) broken.add(l);
  }
  // Without the dummy the chain tail edge is uncovered.
  CHECK_THROWS_AS(lift_solution(inst, red.instance, red.map, broken), Error);
}

TEST_CASE("binarize preserves the exact optimum") {
  for (int i = 0; i < 12; ++i) {
    InstanceData d = i % 2 == 0 ? gen_caterpillar(6 + (i % 3) * 2, derive_seed(51, i), 1, 9)
                                : gen_random_binary(6 + (i % 3) * 2, derive_seed(52, i), 1, 9, 3);
    TapInstance inst = TapInstance::make(d);
    Reduction red = binarize(inst);
    auto orig = exact_tap(inst);
    auto trans = exact_tap(red.instance);
    REQUIRE(orig.feasible());
    REQUIRE(trans.feasible());
    CHECK(*orig.optimum == *trans.optimum);
  }
}

TEST_CASE("node gadget matches the per-node structure") {
  TapInstance inst = TapInstance::make(gen_random_binary(6, 7, 1, 4, 2));
  int internal = 0;
  for (int v = 0; v < inst.node_count(); ++v) internal += inst.degree(v) == 3;
  Reduction red = node_gadget_expand(inst);
  const TapInstance& t = red.instance;
  CHECK(t.node_count() == inst.node_count() + 6 * internal);
  CHECK(static_cast<int>(red.map.dummy_links.size()) == 2 * internal);
  CHECK(t.is_binary());
  CHECK(t.links_leaf_to_leaf());
  for (int dl : red.map.dummy_links) CHECK(t.link(dl).cost == 0);
}

TEST_CASE("node gadget requires binary leaf-link form") {
  CHECK_THROWS_AS(node_gadget_expand(TapInstance::make(gen_star(4))), Error);
}

TEST_CASE("EDGE-feasible maps to NODE-feasible on the expansion and back") {
  for (int i = 0; i < 100; ++i) {
    int n = 6 + (i % 4) * 2;
    TapInstance inst = TapInstance::make(gen_random_binary(n, derive_seed(61, i), 1, 5, 3));
    Reduction red = node_gadget_expand(inst);
    Rng rng(derive_seed(62, i));
    FractionalSolution x = random_feasible_fractional(inst, rng);
    LinearProgram edge_lp = build_lp(inst, LpModel::edge);
    REQUIRE(lp_satisfies(edge_lp, x));

    FractionalSolution pushed = push_fractional(red.map, x);
    LinearProgram node_lp = build_lp(red.instance, LpModel::node);
    CHECK(lp_satisfies(node_lp, pushed));
    CHECK(cost_of(red.instance, pushed) == cost_of(inst, x));

    // NODE-feasible on the expansion drops to EDGE-feasible on the original.
    FractionalSolution lifted = lift_fractional(red.map, pushed);
    CHECK(lp_satisfies(edge_lp, lifted));
    CHECK(cost_of(inst, lifted) == cost_of(inst, x));
  }
}

TEST_CASE("reduction map serializes") {
  Reduction red = binarize(TapInstance::make(star3()));
  ReductionMap back = reduction_map_from_json(reduction_map_to_json(red.map));
  CHECK(back.kind == red.map.kind);
  CHECK(back.dummy_links == red.map.dummy_links);
  CHECK(back.link_correspondence == red.map.link_correspondence);
  CHECK(back.node_correspondence == red.map.node_correspondence);
}
