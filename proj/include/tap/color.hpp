#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tap/instance.hpp"

namespace tap {

// Convex-combination certificate: sum(lambda_i * class_i) <= scale * x
// componentwise with every class a feasible cover, so the cheapest class
// costs at most scale * cost(x). `scale` is the certified factor.
struct Decomposition {
  long k = 0;  // number of color classes
  Rat scale;
  std::vector<IntegralSolution> classes;
  std::vector<Rat> lambdas;
};

struct DecomposeOptions {
  long copy_budget = 1000000;
  // Extra per-step invariant checks (top-down monotonicity, new-color rate).
  bool debug_checks = false;
};

struct ConflictWitness {
  int edge = -1;
  int color = -1;
  std::vector<int> links;
  std::string str(const TapInstance& inst) const;
};

// Copy-level coloring bookkeeping shared by the coloring algorithms. A unit
// is one copy of a link colored either as a whole (covers its full tree
// path) or as one half (LCA to one endpoint). The left endpoint is the one
// with the lexicographically smaller node name.
class ColoringState {
 public:
  enum class Side { whole, left, right };

  ColoringState(const TapInstance& inst, long num_colors);

  const TapInstance& instance() const { return *inst_; }
  long num_colors() const { return num_colors_; }

  void init_pool(int link, long copies) { pool_[link] = copies; }
  long pool(int link) const { return pool_[link]; }

  // Edges covered by a unit of this side.
  const std::vector<int>& side_edges(int link, Side side) const;

  void color_unit(int link, int color, Side side);
  // Removes one whole-colored unit of this color (clean-up phases).
  void uncolor_whole(int link, int color);

  long edge_color_count(int e, int color) const { return edge_count_[e][color - 1]; }
  int edge_distinct(int e) const { return edge_distinct_[e]; }
  bool edge_complete(int e) const { return edge_distinct_[e] == num_colors_; }
  // Smallest color absent from e, or 0 when complete.
  int first_missing(int e) const;
  // Smallest color absent from every edge on the path, scanning the path's
  // deepest-first order; 0 when all edges hold all colors.
  int first_missing_on_path(const std::vector<int>& path) const;
  // Smallest color not on any unit of this link; 0 when saturated.
  int first_missing_on_link(int link) const;
  bool link_has_color(int link, int color) const;
  long link_colored_units(int link) const;
  const std::map<std::pair<int, char>, long>& units(int link) const { return units_[link]; }

  // First conflict: an edge missing some color covered by >= 3 same-colored
  // units. Restricted to the given edges when non-null.
  std::optional<ConflictWitness> find_conflict(const std::vector<int>* edges = nullptr) const;

  // One class per color; a link joins every class whose color appears on any
  // of its units (deduplicated to 0/1).
  std::vector<IntegralSolution> make_classes() const;

 private:
  const TapInstance* inst_;
  long num_colors_;
  std::vector<long> pool_;
  std::vector<std::map<std::pair<int, char>, long>> units_;  // (color, side) -> count
  std::vector<std::vector<long>> edge_count_;
  std::vector<int> edge_distinct_;
  std::vector<std::vector<int>> left_edges_, right_edges_;
};

// Minimum nonzero entry; throws on the all-zero vector.
Rat min_nonzero_alpha(const FractionalSolution& x);

// Top-down pair coloring of k*beta*x copies, beta = 2/(1+alpha): k classes,
// each feasible, certifying factor beta.
Decomposition large_link_decompose(const TapInstance& inst, const FractionalSolution& x,
                                   const DecomposeOptions& opts = {});

// Greedy top-down half-link coloring of 4k*x into 2k classes, factor 2.
Decomposition greedy_decompose(const TapInstance& inst, const FractionalSolution& x,
                               const DecomposeOptions& opts = {});

// As greedy but on 3k*x; requires every edge abundant (coverage >= 4/3),
// factor 3/2.
Decomposition abundant_scaled_decompose(const TapInstance& inst, const FractionalSolution& x,
                                        const DecomposeOptions& opts = {});

// Greedy completion of a partial conflict-free coloring over the edges of
// the subtree rooted at `subtree_root` (top-down). Throws with a witness if
// the input already has a conflict there.
void extend_conflict_free(const TapInstance& inst, ColoringState& partial, int subtree_root);

// Internal form used by the deficient-path pipelines: completes an explicit
// top-down-ordered edge list.
void extend_over_edges(const TapInstance& inst, ColoringState& state,
                       const std::vector<int>& edges_topdown);

struct VerifyResult {
  bool ok = true;
  std::vector<std::string> diagnostics;
};

// (a) every class feasible, (b) lambdas sum to 1 and are nonnegative,
// (c) sum(lambda_i class_i) <= scale * x componentwise, (d) min class cost
// <= scale * cost(x).
VerifyResult verify_decomposition(const TapInstance& inst, const FractionalSolution& x,
                                  const Decomposition& d);

// Minimum-cost class (first index on ties).
IntegralSolution best_color(const TapInstance& inst, const Decomposition& d);
int best_color_index(const TapInstance& inst, const Decomposition& d);

std::string decomposition_to_json(const Decomposition& d);
Decomposition decomposition_from_json(const std::string& text);

}  // namespace tap
