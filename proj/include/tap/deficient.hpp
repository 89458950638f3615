#pragma once

#include <string>
#include <vector>

#include "tap/color.hpp"
#include "tap/instance.hpp"

namespace tap {

// Deficient edges (coverage < 4/3) of a NODE-LP-feasible solution form
// node-disjoint paths; with exactly two, Q is the abundant tree path that
// connects them.
struct DeficiencyProfile {
  std::vector<int> deficient_edges;          // sorted edge ids
  std::vector<std::vector<int>> path_nodes;  // per path, ordered node ids
  std::vector<std::vector<int>> path_edges;  // per path, ordered edge ids
  std::vector<int> q_nodes;                  // z1 .. z2 (only with exactly two paths)
  std::vector<int> q_edges;
};

// Throws when some node carries three deficient edges (that contradicts
// NODE-LP feasibility by the path lemma).
DeficiencyProfile deficiency_profile(const TapInstance& inst, const FractionalSolution& x);

// Total x-weight of links through node u that avoid edge e; at least 2/3
// for every deficient e = uv with u internal, which supplies the 2k
// finishing copies under the 3k scaling. Throws on precondition violations
// and when the bound fails (then x was not NODE-LP feasible).
Rat check_two_thirds_slack(const TapInstance& inst, const FractionalSolution& x, int e, int u);

// 3/2-factor decomposition of 3k*x into 2k classes when the deficient edges
// form at most one path. Zero paths delegate to abundant_scaled_decompose.
Decomposition one_path_decompose(const TapInstance& inst, const FractionalSolution& x,
                                 const DecomposeOptions& opts = {},
                                 std::vector<std::string>* trace = nullptr);

struct PairItem {
  int f = -1;      // link id through e1
  int g = -1;      // link id through e2; -1 on singleton sides
  int color = 0;   // 0 = uncolored
};

struct Pairing {
  std::vector<PairItem> pairs;  // exactly 2k entries
};

// Pairs 2k copies through e1 with 2k copies through e2 (ranked by how far
// they reach along Q), then repairs the pairing so that no edge off Q is
// covered by both members of a pair unless every pair covers it.
Pairing pair_links(const TapInstance& inst, const ColoringState& state, int e1, int e2,
                   const std::vector<int>& q_edges, long k);

// Verifies the pairing postcondition; returns a diagnostic when violated.
std::vector<std::string> check_pairing(const TapInstance& inst, const Pairing& pairing,
                                       const std::vector<int>& q_edges);

// 3/2-factor decomposition with exactly two deficient paths (Theorem-style
// three-case analysis over long links plus the outward finishing walks).
Decomposition two_path_decompose(const TapInstance& inst, const FractionalSolution& x,
                                 const DecomposeOptions& opts = {},
                                 std::vector<std::string>* trace = nullptr);

// Profile-dispatching entry point: 0/1 paths -> one_path_decompose, 2 ->
// two_path_decompose, more -> error ("unsupported profile").
Decomposition deficient_decompose(const TapInstance& inst, const FractionalSolution& x,
                                  const DecomposeOptions& opts = {},
                                  std::vector<std::string>* trace = nullptr);

}  // namespace tap
