#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tap/instance.hpp"
#include "tap/simplex.hpp"

namespace tap {

enum class LpModel { edge, node, odd };
LpModel lp_model_from_string(const std::string& s);
std::string lp_model_name(LpModel m);

struct Provenance {
  enum Kind { edge, node, odd_set, fixed } kind;
  int index = -1;            // edge id, node id, or link id for `fixed`
  std::uint32_t subset = 0;  // node bitmask for odd-set rows
  std::string label;         // human-readable family tag, e.g. "edge a-b"
};

struct Constraint {
  std::vector<std::pair<int, Rat>> coeffs;  // sense is always >=
  Rat rhs;
  Provenance prov;
};

struct LinearProgram {
  int num_vars = 0;
  std::vector<Constraint> constraints;
  std::vector<Rat> objective;
};

inline constexpr int kDefaultOddNodeCap = 16;

// edge: one covering constraint per tree edge. node: adds the rhs-2 union
// constraint per degree-3 node (set union, 0/1 coefficients). odd: adds one
// constraint per odd-cardinality node subset; every link coefficient there is
// even by construction and this is asserted.
LinearProgram build_lp(const TapInstance& inst, LpModel model,
                       int odd_node_cap = kDefaultOddNodeCap);

Rat lp_value(const LinearProgram& lp, const FractionalSolution& x);
bool lp_satisfies(const LinearProgram& lp, const FractionalSolution& x);

// Optional warm-start state for repeated solves over the same constraint
// system (the odd model activates rows lazily; the active set carries over).
struct RowGenState {
  std::vector<int> active;
};

// Optimal basic solution via exact simplex (Bland's rule). Throws Error with
// the edge name when some tree edge has an empty cover set, making the LP
// infeasible.
FractionalSolution solve_lp(const LinearProgram& lp,
                            const std::optional<std::vector<Rat>>& objective_override = {},
                            RowGenState* state = nullptr);

// True iff the constraints tight at x (including tight non-negativity
// bounds) have rank num_vars. Throws if x is infeasible.
bool is_extreme_point(const LinearProgram& lp, const FractionalSolution& x);

enum class ConjectureStatus { all_large, has_twothirds, violates, vacuous };
std::string conjecture_status_name(ConjectureStatus s);

struct ExtremePointVerdict {
  bool is_extreme = false;
  std::optional<Rat> min_nonzero;
  std::optional<Rat> max_value;
  ConjectureStatus status = ConjectureStatus::vacuous;
};

// Classifies x against the two conjectured properties: all nonzero entries
// at least 1/3, or some entry at least 2/3. `violates` means neither holds.
ExtremePointVerdict check_conjecture(const FractionalSolution& x, const LinearProgram& lp);

struct ScanHit {
  std::string instance_name;
  InstanceData instance;
  LpModel model;
  std::vector<Rat> objective;
  FractionalSolution x;
  bool extreme_verified = false;
  Rat min_nonzero, max_value;
};

struct ScanReport {
  int instances = 0;
  long solves = 0;
  std::vector<ScanHit> violations;
  long violations_edge = 0, violations_node = 0, violations_odd = 0;
};

// Samples random integer objectives in [1,100] over a deterministic family
// of binary instances and classifies every optimal extreme point. All
// sampled points are optimal extreme points for their objective, so the
// verdicts cover both readings of the conjecture.
ScanReport conjecture_scan(int max_nodes, int samples_per_instance, std::uint64_t seed,
                           const std::vector<LpModel>& models, int threads = 0);

// Fixes every link with x >= threshold at 1 (two inequality rows) and zeroes
// those links out of the residual objective, so the residual optimum never
// exceeds the original one. Throws when no link meets the threshold.
struct RoundStep {
  IntegralSolution fixed;
  LinearProgram residual;
};
RoundStep iterative_round_step(const TapInstance& inst, const FractionalSolution& x,
                               const Rat& threshold = Rat(2, 3), LpModel model = LpModel::edge);

// Checks the odd-set constraints at the 0/1 vector of a. Integer arithmetic
// over node bitmasks; throws when the instance exceeds the enumeration cap.
bool verify_odd_validity(const TapInstance& inst, const IntegralSolution& a,
                         int odd_node_cap = kDefaultOddNodeCap);

// Brute-force vertex enumeration: solves every full-rank n-subset of
// constraint and bound rows and keeps the feasible solutions. Only for desk
// sizes; throws when the basis count exceeds max_bases.
std::vector<std::vector<Rat>> enumerate_extreme_points(const LinearProgram& lp,
                                                       long max_bases = 2000000);

std::string lp_to_json(const TapInstance& inst, const LinearProgram& lp);

}  // namespace tap
