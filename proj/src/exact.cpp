#include "tap/exact.hpp"

#include <algorithm>

#include "tap/lp.hpp"

namespace tap {

namespace {

// DFS over include/exclude decisions with cost pruning and an unreachable-
// edge cut; complete search, so exact.
struct TapDfs {
  const TapInstance& inst;
  std::vector<int> order;  // link ids, branching order
  std::vector<long> covered;        // per edge: chosen links covering it
  std::vector<long> potential;      // per edge: undecided + chosen links covering it
  IntegralSolution best;
  Rat best_cost;
  IntegralSolution current;
  Rat current_cost = 0;
  long explored = 0;
  long node_limit;

  TapDfs(const TapInstance& i, long limit) : inst(i), node_limit(limit) {}

  void run(size_t at) {
    if (++explored > node_limit) throw Error("exact_tap node limit exceeded");
    if (current_cost >= best_cost) return;
    if (at == order.size()) {
      // All edges covered (the potential cut keeps infeasible prefixes out).
      for (int e = 0; e < inst.edge_count(); ++e) {
        if (covered[e] == 0) return;
      }
      best = current;
      best_cost = current_cost;
      return;
    }
    int l = order[at];
    // Include first: finds cheap incumbents quickly.
    current.add(l);
    current_cost += inst.link(l).cost;
    for (int e : inst.link_path(l)) ++covered[e];
    run(at + 1);
    current.chosen.erase(std::find(current.chosen.begin(), current.chosen.end(), l));
    current_cost -= inst.link(l).cost;
    for (int e : inst.link_path(l)) --covered[e];

    bool dead = false;
    for (int e : inst.link_path(l)) {
      if (--potential[e] == 0 && covered[e] == 0) dead = true;
    }
    if (!dead) run(at + 1);
    for (int e : inst.link_path(l)) ++potential[e];
  }
};

// LP-bounded branch and bound; branches on the fractional link nearest 1/2.
struct TapBnb {
  const TapInstance& inst;
  IntegralSolution best;
  Rat best_cost;
  long explored = 0;
  long node_limit;

  TapBnb(const TapInstance& i, long limit) : inst(i), node_limit(limit) {}

  void run(std::vector<int>& fixed_in, std::vector<char>& banned, const Rat& fixed_cost) {
    if (++explored > node_limit) throw Error("exact_tap node limit exceeded");
    if (fixed_cost >= best_cost) return;
    // Residual LP over free links and uncovered edges.
    LinearProgram lp;
    lp.num_vars = inst.link_count();
    lp.objective.assign(inst.link_count(), Rat(0));
    std::vector<char> in(inst.link_count(), 0);
    for (int l : fixed_in) in[l] = 1;
    for (int l = 0; l < inst.link_count(); ++l) {
      if (!banned[l] && !in[l]) lp.objective[l] = inst.link(l).cost;
    }
    for (int e = 0; e < inst.edge_count(); ++e) {
      bool done = false;
      Constraint c;
      for (int l : inst.cover_set(e)) {
        if (in[l]) done = true;
        if (!banned[l] && !in[l]) c.coeffs.emplace_back(l, Rat(1));
      }
      if (done) continue;
      c.rhs = 1;
      c.prov = {Provenance::edge, e, 0, "edge " + inst.edge_name(e)};
      if (c.coeffs.empty()) return;  // uncoverable: prune
      lp.constraints.push_back(std::move(c));
    }
    FractionalSolution x;
    try {
      x = solve_lp(lp);
    } catch (const Error&) {
      return;  // infeasible residual
    }
    Rat bound = fixed_cost + lp_value(lp, x);
    if (bound >= best_cost) return;

    int branch = -1;
    Rat branch_gap;
    for (const auto& [l, r] : x.values) {
      if (denominator(r) == 1) continue;
      Rat gap = r > Rat(1, 2) ? r - Rat(1, 2) : Rat(1, 2) - r;
      if (branch < 0 || gap < branch_gap) {
        branch = l;
        branch_gap = gap;
      }
    }
    if (branch < 0) {
      // Integral optimum of the residual: a feasible completion.
      IntegralSolution cand;
      for (int l : fixed_in) cand.add(l);
      for (const auto& [l, r] : x.values) {
        if (r == 1) cand.add(l);
      }
      if (is_feasible_cover(inst, cand) && bound < best_cost) {
        best = cand;
        best_cost = bound;
      }
      return;
    }
    fixed_in.push_back(branch);
    run(fixed_in, banned, fixed_cost + inst.link(branch).cost);
    fixed_in.pop_back();
    banned[branch] = 1;
    run(fixed_in, banned, fixed_cost);
    banned[branch] = 0;
  }
};

}  // namespace

OracleResult exact_tap(const TapInstance& inst, const OracleOptions& opts) {
  OracleResult res;
  for (int e = 0; e < inst.edge_count(); ++e) {
    if (inst.cover_set(e).empty()) return res;  // infeasible
  }
  if (inst.link_count() > opts.max_links) {
    throw Error("exact_tap: " + std::to_string(inst.link_count()) + " links exceeds bound " +
                std::to_string(opts.max_links));
  }
  IntegralSolution all;
  for (int l = 0; l < inst.link_count(); ++l) all.add(l);

  if (inst.link_count() <= opts.exhaustive_links) {
    TapDfs dfs(inst, opts.node_limit);
    dfs.best = all;
    dfs.best_cost = cost_of(inst, all);
    dfs.covered.assign(inst.edge_count(), 0);
    dfs.potential.assign(inst.edge_count(), 0);
    for (int e = 0; e < inst.edge_count(); ++e) {
      dfs.potential[e] = static_cast<long>(inst.cover_set(e).size());
    }
    dfs.order.resize(inst.link_count());
    for (int l = 0; l < inst.link_count(); ++l) dfs.order[l] = l;
    std::sort(dfs.order.begin(), dfs.order.end(), [&](int a, int b) {
      if (inst.link(a).cost != inst.link(b).cost) return inst.link(a).cost > inst.link(b).cost;
      return a < b;
    });
    // best_cost is a valid incumbent, so seed best with the full link set
    // (feasible by the cover-set check above).
    dfs.best_cost += 1;  // allow matching the all-links cost
    dfs.run(0);
    res.nodes_explored = dfs.explored;
    if (!is_feasible_cover(inst, dfs.best)) throw Error("exact_tap witness check failed");
    res.optimum = cost_of(inst, dfs.best);
    res.witness = dfs.best;
    return res;
  }

  TapBnb bnb(inst, opts.node_limit);
  bnb.best = all;
  bnb.best_cost = cost_of(inst, all) + 1;
  std::vector<int> fixed_in;
  std::vector<char> banned(inst.link_count(), 0);
  bnb.run(fixed_in, banned, Rat(0));
  res.nodes_explored = bnb.explored;
  if (!is_feasible_cover(inst, bnb.best)) throw Error("exact_tap witness check failed");
  res.optimum = cost_of(inst, bnb.best);
  res.witness = bnb.best;
  return res;
}

OracleResult exact_3tap(const ThreeTapInstance& inst, const OracleOptions& opts) {
  (void)opts;
  OracleResult res;
  const TapInstance& g = inst.graph;
  // Candidate midpoints per tree edge; empty means infeasible outright.
  std::vector<std::vector<int>> cands(g.edge_count());
  for (int e = 0; e < g.edge_count(); ++e) {
    auto [a, b] = g.edge(e);
    for (int v = 0; v < g.node_count(); ++v) {
      if (v != a && v != b && inst.pair_available(a, v) && inst.pair_available(b, v)) {
        cands[e].push_back(v);
      }
    }
    if (cands[e].empty()) return res;
  }

  // Greedy incumbent: cheapest midpoint per uncovered edge.
  IntegralSolution greedy;
  for (;;) {
    auto unc = uncovered_3tap(inst, greedy);
    if (unc.empty()) break;
    int e = unc.front();
    auto [a, b] = g.edge(e);
    int pick = -1;
    Rat pick_cost;
    for (int v : cands[e]) {
      Rat c = 0;
      for (int u : {a, b}) {
        if (g.edge_between(u, v) >= 0) continue;
        c += *inst.pair_cost(u, v);
      }
      if (pick < 0 || c < pick_cost) {
        pick = v;
        pick_cost = c;
      }
    }
    for (int u : {a, b}) {
      if (g.edge_between(u, pick) < 0) {
        int l = -1;
        for (int m = 0; m < g.link_count(); ++m) {
          const Link& lk = g.link(m);
          bool same = (lk.u == u && lk.v == pick) || (lk.u == pick && lk.v == u);
          if (same && (l < 0 || lk.cost < g.link(l).cost)) l = m;
        }
        greedy.add(l);
      }
    }
  }

  struct Dfs {
    const ThreeTapInstance& inst;
    const std::vector<std::vector<int>>& cands;
    IntegralSolution best, current;
    Rat best_cost, current_cost = 0;
    long explored = 0;
    long limit;

    void run() {
      if (++explored > limit) throw Error("exact_3tap node limit exceeded");
      if (current_cost >= best_cost) return;
      auto unc = uncovered_3tap(inst, current);
      if (unc.empty()) {
        best = current;
        best_cost = current_cost;
        return;
      }
      // Branch on the uncovered edge with the fewest candidates.
      int e = unc.front();
      for (int f : unc) {
        if (cands[f].size() < cands[e].size()) e = f;
      }
      auto [a, b] = inst.graph.edge(e);
      for (int v : cands[e]) {
        std::vector<int> bought;
        Rat added = 0;
        bool ok = true;
        for (int u : {a, b}) {
          if (inst.graph.edge_between(u, v) >= 0) continue;
          int l = -1;
          for (int m = 0; m < inst.graph.link_count(); ++m) {
            const Link& lk = inst.graph.link(m);
            bool same = (lk.u == u && lk.v == v) || (lk.u == v && lk.v == u);
            if (same && (l < 0 || lk.cost < inst.graph.link(l).cost)) l = m;
          }
          if (l < 0) {
            ok = false;
            break;
          }
          if (!current.contains(l)) {
            bought.push_back(l);
            added += inst.graph.link(l).cost;
          }
        }
        if (ok) {
          for (int l : bought) current.add(l);
          current_cost += added;
          run();
          current_cost -= added;
          for (int l : bought) {
            current.chosen.erase(std::find(current.chosen.begin(), current.chosen.end(), l));
          }
        }
      }
    }
  };

  Dfs dfs{inst, cands, greedy, {}, cost_of(g, greedy) + 1, Rat(0), 0, opts.node_limit};
  dfs.run();
  res.nodes_explored = dfs.explored;
  if (!is_feasible_3tap(inst, dfs.best)) throw Error("exact_3tap witness check failed");
  res.optimum = cost_of(g, dfs.best);
  res.witness = dfs.best;
  return res;
}

SetCoverResult exact_set_cover(const SetCoverInstance& sc, int max_sets) {
  SetCoverResult res;
  if (static_cast<int>(sc.sets.size()) > max_sets) {
    throw Error("exact_set_cover: " + std::to_string(sc.sets.size()) + " sets exceeds bound " +
                std::to_string(max_sets));
  }
  std::vector<std::vector<int>> covering(sc.num_elements);
  for (int s = 0; s < static_cast<int>(sc.sets.size()); ++s) {
    for (int e : sc.sets[s].elements) covering[e].push_back(s);
  }
  for (int e = 0; e < sc.num_elements; ++e) {
    if (covering[e].empty()) return res;  // infeasible
  }

  Rat all_cost = 0;
  for (const auto& s : sc.sets) all_cost += s.cost;

  struct Dfs {
    const SetCoverInstance& sc;
    const std::vector<std::vector<int>>& covering;
    std::vector<int> current, best;
    std::vector<int> cover_count;
    Rat current_cost = 0, best_cost;
    long explored = 0;

    void run() {
      ++explored;
      if (current_cost >= best_cost) return;
      int elem = -1;
      for (int e = 0; e < sc.num_elements; ++e) {
        if (cover_count[e] == 0 &&
            (elem < 0 || covering[e].size() < covering[elem].size())) {
          elem = e;
        }
      }
      if (elem < 0) {
        best = current;
        best_cost = current_cost;
        return;
      }
      for (int s : covering[elem]) {
        current.push_back(s);
        current_cost += sc.sets[s].cost;
        for (int e : sc.sets[s].elements) ++cover_count[e];
        run();
        for (int e : sc.sets[s].elements) --cover_count[e];
        current_cost -= sc.sets[s].cost;
        current.pop_back();
      }
    }
  };
  Dfs dfs{sc, covering, {}, {}, std::vector<int>(sc.num_elements, 0), Rat(0), all_cost + 1, 0};
  dfs.run();
  res.nodes_explored = dfs.explored;
  std::sort(dfs.best.begin(), dfs.best.end());
  res.chosen_sets = dfs.best;
  Rat total = 0;
  for (int s : dfs.best) total += sc.sets[s].cost;
  res.optimum = total;
  return res;
}

}  // namespace tap
