#pragma once

#include <optional>

#include "tap/gen.hpp"
#include "tap/instance.hpp"
#include "tap/threetap.hpp"

namespace tap {

struct OracleResult {
  std::optional<Rat> optimum;  // empty = infeasible
  IntegralSolution witness;
  long nodes_explored = 0;
  bool feasible() const { return optimum.has_value(); }
};

struct OracleOptions {
  int exhaustive_links = 24;  // plain DFS below, LP-bounded branch and bound above
  int max_links = 40;
  long node_limit = 50000000;
};

// Minimum-cost feasible cover by exhaustive DFS with cost pruning, or
// LP-bounded branch and bound on larger link counts. The witness is
// re-checked before returning.
OracleResult exact_tap(const TapInstance& inst, const OracleOptions& opts = {});

// Minimum-cost link set putting every tree edge into a triangle.
OracleResult exact_3tap(const ThreeTapInstance& inst, const OracleOptions& opts = {});

struct SetCoverResult {
  std::optional<Rat> optimum;
  std::vector<int> chosen_sets;
  long nodes_explored = 0;
  bool feasible() const { return optimum.has_value(); }
};

SetCoverResult exact_set_cover(const SetCoverInstance& sc, int max_sets = 20);

}  // namespace tap
