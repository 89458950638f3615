#pragma once

#include <map>
#include <string>
#include <utility>

#include "tap/instance.hpp"

namespace tap {

// Cost-preserving solution correspondence for an instance transformation.
// Dummy links are the zero-cost links the construction adds; original links
// keep their indices (they are emitted first, dummies appended).
struct ReductionMap {
  enum Kind { binarize, node_gadget } kind = binarize;
  std::vector<int> dummy_links;            // link ids in the transformed instance
  std::map<int, int> link_correspondence;  // original link id -> transformed id
  std::map<std::string, std::string> node_correspondence;
};

struct Reduction {
  InstanceData data;  // transformed instance (serializable)
  TapInstance instance;
  ReductionMap map;
};

// Theorem-style binarization: every internal node is replaced by a dummy
// chain so that all degrees become 1 or 3 and every link joins two leaves;
// one zero-cost dummy link per transformed node covers its chain.
Reduction binarize(const TapInstance& inst);

// Per-internal-node gadget expansion (a1..a3, b1..b3 with the zero-cost
// b-chain links). Requires a binary instance with leaf-to-leaf links. Any
// EDGE-feasible solution on the input maps to a NODE-feasible one on the
// output at equal cost, and back.
Reduction node_gadget_expand(const TapInstance& inst);

// A union dummies, mapped through the correspondence. Throws when a is not
// feasible for the original instance.
IntegralSolution push_solution(const TapInstance& original, const TapInstance& transformed,
                               const ReductionMap& map, const IntegralSolution& a);

// Preimage of the non-dummy links. Throws when a_t is not feasible for the
// transformed instance.
IntegralSolution lift_solution(const TapInstance& original, const TapInstance& transformed,
                               const ReductionMap& map, const IntegralSolution& a_t);

// Fractional counterparts: dummies enter at value 1 and are dropped on the
// way back.
FractionalSolution push_fractional(const ReductionMap& map, const FractionalSolution& x);
FractionalSolution lift_fractional(const ReductionMap& map, const FractionalSolution& x_t);

std::string reduction_map_to_json(const ReductionMap& map);
ReductionMap reduction_map_from_json(const std::string& text);

}  // namespace tap
