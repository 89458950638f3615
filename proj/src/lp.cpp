#include "tap/lp.hpp"

#include <algorithm>
#include <bit>
#include <json.hpp>
#include <set>

namespace tap {

LpModel lp_model_from_string(const std::string& s) {
  if (s == "edge") return LpModel::edge;
  if (s == "node") return LpModel::node;
  if (s == "odd") return LpModel::odd;
  throw Error("unknown LP model '" + s + "'");
}

std::string lp_model_name(LpModel m) {
  switch (m) {
    case LpModel::edge: return "edge";
    case LpModel::node: return "node";
    case LpModel::odd: return "odd";
  }
  return "?";
}

LinearProgram build_lp(const TapInstance& inst, LpModel model, int odd_node_cap) {
  LinearProgram lp;
  lp.num_vars = inst.link_count();
  lp.objective.reserve(lp.num_vars);
  for (const auto& l : inst.links()) lp.objective.push_back(l.cost);

  if (model != LpModel::edge && (!inst.is_binary() || !inst.links_leaf_to_leaf())) {
    throw Error(lp_model_name(model) +
                " model requires a binary instance with leaf-to-leaf links");
  }

  for (int e = 0; e < inst.edge_count(); ++e) {
    Constraint c;
    for (int l : inst.cover_set(e)) c.coeffs.emplace_back(l, Rat(1));
    c.rhs = 1;
    c.prov = {Provenance::edge, e, 0, "edge " + inst.edge_name(e)};
    lp.constraints.push_back(std::move(c));
  }

  if (model == LpModel::node) {
    for (int v = 0; v < inst.node_count(); ++v) {
      if (inst.degree(v) != 3) continue;
      std::set<int> links;
      for (int w : inst.neighbors(v)) {
        int e = inst.edge_between(v, w);
        for (int l : inst.cover_set(e)) links.insert(l);
      }
      Constraint c;
      for (int l : links) c.coeffs.emplace_back(l, Rat(1));
      c.rhs = 2;
      c.prov = {Provenance::node, v, 0, "node " + inst.node_name(v)};
      lp.constraints.push_back(std::move(c));
    }
  }

  if (model == LpModel::odd) {
    const int n = inst.node_count();
    if (n > odd_node_cap) {
      throw Error("odd model: " + std::to_string(n) + " nodes exceeds the enumeration cap of " +
                  std::to_string(odd_node_cap));
    }
    for (std::uint32_t s = 1; s < (1u << n); ++s) {
      if (std::popcount(s) % 2 == 0) continue;
      auto crosses = [&](int a, int b) { return ((s >> a) & 1u) != ((s >> b) & 1u); };
      std::vector<int> cut_edges;
      for (int e = 0; e < inst.edge_count(); ++e) {
        auto [a, b] = inst.edge(e);
        if (crosses(a, b)) cut_edges.push_back(e);
      }
      Constraint c;
      for (int l = 0; l < inst.link_count(); ++l) {
        int coeff = crosses(inst.link(l).u, inst.link(l).v) ? 1 : 0;
        for (int e : cut_edges) {
          if (inst.link_covers(l, e)) ++coeff;
        }
        if (coeff == 0) continue;
        if (coeff % 2 != 0) {
          throw Error("odd model: link coefficient " + std::to_string(coeff) +
                      " is not even (subset " + std::to_string(s) + ")");
        }
        c.coeffs.emplace_back(l, Rat(coeff));
      }
      c.rhs = static_cast<int>(cut_edges.size()) + 1;
      c.prov = {Provenance::odd_set, -1, s, "odd-set " + std::to_string(s)};
      lp.constraints.push_back(std::move(c));
    }
  }
  return lp;
}

Rat lp_value(const LinearProgram& lp, const FractionalSolution& x) {
  Rat total = 0;
  for (const auto& [l, r] : x.values) total += lp.objective[l] * r;
  return total;
}

bool lp_satisfies(const LinearProgram& lp, const FractionalSolution& x) {
  for (const auto& [l, r] : x.values) {
    if (r < 0) return false;
  }
  for (const auto& c : lp.constraints) {
    Rat v = 0;
    for (const auto& [l, coef] : c.coeffs) v += coef * x.value(l);
    if (v < c.rhs) return false;
  }
  return true;
}

FractionalSolution solve_lp(const LinearProgram& lp,
                            const std::optional<std::vector<Rat>>& objective_override,
                            RowGenState* state) {
  for (const auto& c : lp.constraints) {
    if (c.coeffs.empty() && c.rhs > 0) {
      if (c.prov.kind == Provenance::edge) {
        throw Error("uncoverable " + c.prov.label);
      }
      throw Error("infeasible LP: empty constraint " + c.prov.label);
    }
  }
  const std::vector<Rat>& obj = objective_override ? *objective_override : lp.objective;
  if (static_cast<int>(obj.size()) != lp.num_vars) {
    throw Error("objective size mismatch");
  }

  const int total_rows = static_cast<int>(lp.constraints.size());
  std::vector<char> is_active(total_rows, 0);
  std::vector<int> active;
  for (int i = 0; i < total_rows; ++i) {
    if (lp.constraints[i].prov.kind != Provenance::odd_set) {
      is_active[i] = 1;
      active.push_back(i);
    }
  }
  if (state) {
    for (int i : state->active) {
      if (i >= 0 && i < total_rows && !is_active[i]) {
        is_active[i] = 1;
        active.push_back(i);
      }
    }
    std::sort(active.begin(), active.end());
  }

  for (;;) {
    SimplexProblem p;
    p.num_vars = lp.num_vars;
    p.objective = obj;
    for (int i : active) {
      p.rows.push_back(lp.constraints[i].coeffs);
      p.rhs.push_back(lp.constraints[i].rhs);
    }
    SimplexSolution sol = solve_simplex(p);
    if (sol.status == SimplexStatus::infeasible) {
      throw Error("infeasible LP");
    }
    if (sol.status == SimplexStatus::unbounded) {
      throw Error("unbounded LP (negative objective entry over a covering system)");
    }

    // Lazy activation of violated inactive rows; the returned point is an
    // extreme point of the active relaxation that is feasible for the full
    // system, hence an extreme point of the full system.
    std::vector<std::pair<Rat, int>> violated;
    for (int i = 0; i < total_rows; ++i) {
      if (is_active[i]) continue;
      const auto& c = lp.constraints[i];
      Rat v = 0;
      for (const auto& [l, coef] : c.coeffs) {
        if (sol.x[l] != 0) v += coef * sol.x[l];
      }
      if (v < c.rhs) violated.emplace_back(c.rhs - v, i);
    }
    if (violated.empty()) {
      if (state) state->active = active;
      FractionalSolution x;
      for (int l = 0; l < lp.num_vars; ++l) x.set(l, sol.x[l]);
      return x;
    }
    std::sort(violated.begin(), violated.end(), [](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first > b.first;
      return a.second < b.second;
    });
    size_t take = std::max<size_t>(16, active.size() / 2);
    for (size_t i = 0; i < violated.size() && i < take; ++i) {
      is_active[violated[i].second] = 1;
      active.push_back(violated[i].second);
    }
    std::sort(active.begin(), active.end());
  }
}

namespace {

// Incremental rank tracker over rational row vectors.
class RankAccumulator {
 public:
  explicit RankAccumulator(int n) : n_(n) {}
  int rank() const { return static_cast<int>(rows_.size()); }
  // Returns true when the row was independent of the span so far.
  bool push(std::vector<Rat> row) {
    for (size_t i = 0; i < rows_.size(); ++i) {
      Rat lead = row[pivot_cols_[i]];
      if (lead != 0) {
        for (int j = 0; j < n_; ++j) {
          if (rows_[i][j] != 0) row[j] -= lead * rows_[i][j];
        }
      }
    }
    int col = -1;
    for (int j = 0; j < n_; ++j) {
      if (row[j] != 0) {
        col = j;
        break;
      }
    }
    if (col < 0) return false;
    Rat inv = row[col];
    for (int j = 0; j < n_; ++j) {
      if (row[j] != 0) row[j] /= inv;
    }
    rows_.push_back(std::move(row));
    pivot_cols_.push_back(col);
    return true;
  }

 private:
  int n_;
  std::vector<std::vector<Rat>> rows_;
  std::vector<int> pivot_cols_;
};

}  // namespace

bool is_extreme_point(const LinearProgram& lp, const FractionalSolution& x) {
  if (!lp_satisfies(lp, x)) throw Error("is_extreme_point: x is infeasible");
  const int n = lp.num_vars;
  RankAccumulator acc(n);
  for (int l = 0; l < n; ++l) {
    if (x.value(l) == 0) {
      std::vector<Rat> row(n, Rat(0));
      row[l] = 1;
      acc.push(std::move(row));
    }
  }
  for (const auto& c : lp.constraints) {
    if (acc.rank() == n) return true;
    Rat v = 0;
    for (const auto& [l, coef] : c.coeffs) v += coef * x.value(l);
    if (v != c.rhs) continue;
    std::vector<Rat> row(n, Rat(0));
    for (const auto& [l, coef] : c.coeffs) row[l] = coef;
    acc.push(std::move(row));
  }
  return acc.rank() == n;
}

std::string conjecture_status_name(ConjectureStatus s) {
  switch (s) {
    case ConjectureStatus::all_large: return "all_large";
    case ConjectureStatus::has_twothirds: return "has_twothirds";
    case ConjectureStatus::violates: return "violates";
    case ConjectureStatus::vacuous: return "vacuous";
  }
  return "?";
}

ExtremePointVerdict check_conjecture(const FractionalSolution& x, const LinearProgram& lp) {
  (void)lp;
  ExtremePointVerdict v;
  for (const auto& [l, r] : x.values) {
    if (r == 0) continue;
    if (!v.min_nonzero || r < *v.min_nonzero) v.min_nonzero = r;
    if (!v.max_value || r > *v.max_value) v.max_value = r;
  }
  if (!v.min_nonzero) {
    v.status = ConjectureStatus::vacuous;
  } else if (*v.min_nonzero >= Rat(1, 3)) {
    v.status = ConjectureStatus::all_large;
  } else if (*v.max_value >= Rat(2, 3)) {
    v.status = ConjectureStatus::has_twothirds;
  } else {
    v.status = ConjectureStatus::violates;
  }
  return v;
}

RoundStep iterative_round_step(const TapInstance& inst, const FractionalSolution& x,
                               const Rat& threshold, LpModel model) {
  RoundStep step;
  for (const auto& [l, r] : x.values) {
    if (r >= threshold) step.fixed.add(l);
  }
  if (step.fixed.chosen.empty()) {
    throw Error("iterative_round_step: no link reaches threshold " + rat_str(threshold));
  }
  step.residual = build_lp(inst, model);
  for (int l : step.fixed.chosen) {
    // Fixing x_l = 1: the rounded link's cost is paid by the rounding, so it
    // leaves the residual objective.
    step.residual.objective[l] = 0;
    Constraint lo;
    lo.coeffs.emplace_back(l, Rat(1));
    lo.rhs = 1;
    lo.prov = {Provenance::fixed, l, 0, "fixed link " + std::to_string(l) + " >= 1"};
    step.residual.constraints.push_back(std::move(lo));
    Constraint hi;
    hi.coeffs.emplace_back(l, Rat(-1));
    hi.rhs = -1;
    hi.prov = {Provenance::fixed, l, 0, "fixed link " + std::to_string(l) + " <= 1"};
    step.residual.constraints.push_back(std::move(hi));
  }
  return step;
}

bool verify_odd_validity(const TapInstance& inst, const IntegralSolution& a, int odd_node_cap) {
  const int n = inst.node_count();
  if (n > odd_node_cap) {
    throw Error("verify_odd_validity: " + std::to_string(n) + " nodes exceeds cap " +
                std::to_string(odd_node_cap));
  }
  // coverage counts per edge under the 0/1 vector of `a`
  std::vector<long> cov(inst.edge_count(), 0);
  for (int l : a.chosen) {
    for (int e : inst.link_path(l)) ++cov[e];
  }
  for (std::uint32_t s = 1; s < (1u << n); ++s) {
    if (std::popcount(s) % 2 == 0) continue;
    auto crosses = [&](int u, int v) { return ((s >> u) & 1u) != ((s >> v) & 1u); };
    long lhs = 0, cut = 0;
    for (int e = 0; e < inst.edge_count(); ++e) {
      auto [u, v] = inst.edge(e);
      if (crosses(u, v)) {
        ++cut;
        lhs += cov[e];
      }
    }
    for (int l : a.chosen) {
      if (crosses(inst.link(l).u, inst.link(l).v)) ++lhs;
    }
    if (lhs < cut + 1) return false;
  }
  return true;
}

std::vector<std::vector<Rat>> enumerate_extreme_points(const LinearProgram& lp, long max_bases) {
  const int n = lp.num_vars;
  // Row pool: all constraints plus the n non-negativity bounds.
  std::vector<std::vector<Rat>> rows;
  std::vector<Rat> rhs;
  for (const auto& c : lp.constraints) {
    std::vector<Rat> r(n, Rat(0));
    for (const auto& [l, coef] : c.coeffs) r[l] = coef;
    rows.push_back(std::move(r));
    rhs.push_back(c.rhs);
  }
  for (int l = 0; l < n; ++l) {
    std::vector<Rat> r(n, Rat(0));
    r[l] = 1;
    rows.push_back(std::move(r));
    rhs.push_back(0);
  }
  const int R = static_cast<int>(rows.size());
  if (R < n) return {};

  // C(R, n) with overflow guard against the budget.
  long double bases = 1;
  for (int i = 0; i < n; ++i) bases = bases * (R - i) / (i + 1);
  if (bases > static_cast<long double>(max_bases)) {
    throw Error("enumerate_extreme_points: too many bases");
  }

  std::set<std::vector<std::string>> seen;
  std::vector<std::vector<Rat>> out;
  std::vector<int> comb(n);
  for (int i = 0; i < n; ++i) comb[i] = i;
  auto advance = [&]() {
    int i = n - 1;
    while (i >= 0 && comb[i] == R - n + i) --i;
    if (i < 0) return false;
    ++comb[i];
    for (int j = i + 1; j < n; ++j) comb[j] = comb[j - 1] + 1;
    return true;
  };
  do {
    // Solve the n x n system given by the selected rows.
    std::vector<std::vector<Rat>> m(n, std::vector<Rat>(n + 1));
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) m[i][j] = rows[comb[i]][j];
      m[i][n] = rhs[comb[i]];
    }
    bool singular = false;
    for (int col = 0; col < n && !singular; ++col) {
      int piv = -1;
      for (int i = col; i < n; ++i) {
        if (m[i][col] != 0) {
          piv = i;
          break;
        }
      }
      if (piv < 0) {
        singular = true;
        break;
      }
      std::swap(m[col], m[piv]);
      Rat d = m[col][col];
      for (int j = col; j <= n; ++j) m[col][j] /= d;
      for (int i = 0; i < n; ++i) {
        if (i == col || m[i][col] == 0) continue;
        Rat f = m[i][col];
        for (int j = col; j <= n; ++j) m[i][j] -= f * m[col][j];
      }
    }
    if (singular) continue;
    std::vector<Rat> x(n);
    bool feasible = true;
    for (int i = 0; i < n; ++i) {
      x[i] = m[i][n];
      if (x[i] < 0) feasible = false;
    }
    if (!feasible) continue;
    for (size_t ci = 0; ci < lp.constraints.size() && feasible; ++ci) {
      Rat v = 0;
      for (const auto& [l, coef] : lp.constraints[ci].coeffs) v += coef * x[l];
      if (v < lp.constraints[ci].rhs) feasible = false;
    }
    if (!feasible) continue;
    std::vector<std::string> key;
    key.reserve(n);
    for (const auto& r : x) key.push_back(rat_str(r));
    if (seen.insert(key).second) out.push_back(std::move(x));
  } while (advance());
  return out;
}

std::string lp_to_json(const TapInstance& inst, const LinearProgram& lp) {
  (void)inst;
  nlohmann::json j;
  j["num_vars"] = lp.num_vars;
  j["objective"] = nlohmann::json::array();
  for (const auto& c : lp.objective) j["objective"].push_back(rat_str(c));
  j["constraints"] = nlohmann::json::array();
  for (const auto& c : lp.constraints) {
    nlohmann::json row;
    row["rhs"] = rat_str(c.rhs);
    row["sense"] = ">=";
    row["provenance"] = c.prov.label;
    row["coeffs"] = nlohmann::json::array();
    for (const auto& [l, coef] : c.coeffs) {
      row["coeffs"].push_back({{"link", l}, {"coef", rat_str(coef)}});
    }
    j["constraints"].push_back(std::move(row));
  }
  return j.dump(2) + "\n";
}

}  // namespace tap
