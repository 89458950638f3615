#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tap/gen.hpp"
#include "tap/instance.hpp"

namespace tap {

// Triangle-augmentation instance: the tree plus the available links (absent
// pairs are unavailable); tree edges always count as present at cost 0 when
// forming triangles.
struct ThreeTapInstance {
  TapInstance graph;  // tree plus candidate links
  bool unweighted = false;

  static ThreeTapInstance make(const InstanceData& data, bool unweighted);
  // -1 when the pair is neither a tree edge nor an available link.
  // Tree edges answer with cost 0.
  std::optional<Rat> pair_cost(int u, int v) const;
  bool pair_available(int u, int v) const;
};

ThreeTapInstance threetap_from_json(const std::string& text);
std::string threetap_to_json(const ThreeTapInstance& inst);

// True iff every tree edge lies in a triangle of tree + chosen links.
bool is_feasible_3tap(const ThreeTapInstance& inst, const IntegralSolution& a);
// Tree edges currently not in any triangle.
std::vector<int> uncovered_3tap(const ThreeTapInstance& inst, const IntegralSolution& a);

struct Star {
  int center = -1;
  std::vector<int> spokes;    // node ids with a usable connection to center
  Rat cost;                   // sum of spoke link costs (tree edges cost 0)
  std::vector<int> covered;   // tree edges with both endpoints among spokes
  bool infinite_density = false;
};

// Covered edges and total cost for an explicit spoke set; throws when some
// spoke has no available connection to the center.
Star star_coverage(const ThreeTapInstance& inst, int center, const std::vector<int>& spokes);

// Max-density star against the uncovered set: per candidate center, a
// Dinkelbach iteration over vertex-weighted densest-subgraph min-cuts with
// exact rational capacities. Zero-cost stars with positive coverage win
// outright with an infinite-density sentinel. Returns nothing when no star
// covers any uncovered edge.
std::optional<Star> max_density_star(const ThreeTapInstance& inst,
                                     const std::set<int>& uncovered);

// Greedy set-cover loop over max-density stars (zero-cost stars applied as a
// free preprocessing round). Throws naming an uncoverable edge when the
// instance is infeasible.
IntegralSolution greedy_3tap(const ThreeTapInstance& inst);

// The set-cover hardness gadget: tree over {r,s,t}, set nodes and element
// nodes; zero-cost links from s, t-S_i links at set cost, zero-cost
// element-membership links, and prohibitive links everywhere else. The 3TAP
// optimum equals the set-cover optimum.
ThreeTapInstance setcover_gadget(const SetCoverInstance& sc);

// For every tree edge picks a common neighbor with both connections
// available, then drops redundant links to make the result minimal.
// Unweighted instances only.
IntegralSolution unweighted_3tap(const ThreeTapInstance& inst);

}  // namespace tap
