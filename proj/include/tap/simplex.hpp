#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "tap/rational.hpp"

namespace tap {

// min c.x  s.t.  rows[i].x >= rhs[i], x >= 0, all data exact rationals.
struct SimplexProblem {
  int num_vars = 0;
  std::vector<std::vector<std::pair<int, Rat>>> rows;  // sparse coefficient rows
  std::vector<Rat> rhs;
  std::vector<Rat> objective;
};

enum class SimplexStatus { optimal, infeasible, unbounded };

struct SimplexSolution {
  SimplexStatus status = SimplexStatus::infeasible;
  std::vector<Rat> x;
  Rat objective;
};

// Two-phase tableau simplex with Bland's anti-cycling pivot rule. Fully
// deterministic for fixed input; returns a basic optimal solution, which is
// an extreme point of the feasible region.
SimplexSolution solve_simplex(const SimplexProblem& p);

}  // namespace tap
