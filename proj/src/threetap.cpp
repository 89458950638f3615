#include "tap/threetap.hpp"

#include <algorithm>
#include <json.hpp>
#include <map>

#include "tap/io.hpp"

namespace tap {

ThreeTapInstance ThreeTapInstance::make(const InstanceData& data, bool unweighted) {
  ThreeTapInstance tt{TapInstance::make(data), unweighted};
  if (unweighted) {
    for (const auto& l : tt.graph.links()) {
      if (l.cost != 1) {
        throw Error("unweighted 3TAP: every available link must have cost 1");
      }
    }
  }
  return tt;
}

std::optional<Rat> ThreeTapInstance::pair_cost(int u, int v) const {
  if (graph.edge_between(u, v) >= 0) return Rat(0);
  std::optional<Rat> best;
  for (const auto& l : graph.links()) {
    bool same = (l.u == u && l.v == v) || (l.u == v && l.v == u);
    if (same && (!best || l.cost < *best)) best = l.cost;
  }
  return best;
}

bool ThreeTapInstance::pair_available(int u, int v) const {
  return pair_cost(u, v).has_value();
}

ThreeTapInstance threetap_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  bool unweighted = j.contains("unweighted") && j.at("unweighted").get<bool>();
  return ThreeTapInstance::make(instance_from_json(text), unweighted);
}

std::string threetap_to_json(const ThreeTapInstance& inst) {
  nlohmann::json j = nlohmann::json::parse(instance_to_json(to_data(inst.graph)));
  if (inst.unweighted) j["unweighted"] = true;
  return j.dump(2) + "\n";
}

namespace {

// Adjacency of tree plus chosen links.
std::vector<std::vector<char>> present_matrix(const ThreeTapInstance& inst,
                                              const IntegralSolution& a) {
  int n = inst.graph.node_count();
  std::vector<std::vector<char>> adj(n, std::vector<char>(n, 0));
  for (int e = 0; e < inst.graph.edge_count(); ++e) {
    auto [u, v] = inst.graph.edge(e);
    adj[u][v] = adj[v][u] = 1;
  }
  for (int l : a.chosen) {
    const Link& lk = inst.graph.link(l);
    adj[lk.u][lk.v] = adj[lk.v][lk.u] = 1;
  }
  return adj;
}

}  // namespace

std::vector<int> uncovered_3tap(const ThreeTapInstance& inst, const IntegralSolution& a) {
  auto adj = present_matrix(inst, a);
  int n = inst.graph.node_count();
  std::vector<int> out;
  for (int e = 0; e < inst.graph.edge_count(); ++e) {
    auto [u, v] = inst.graph.edge(e);
    bool in_triangle = false;
    for (int w = 0; w < n && !in_triangle; ++w) {
      if (w != u && w != v && adj[u][w] && adj[v][w]) in_triangle = true;
    }
    if (!in_triangle) out.push_back(e);
  }
  return out;
}

bool is_feasible_3tap(const ThreeTapInstance& inst, const IntegralSolution& a) {
  return uncovered_3tap(inst, a).empty();
}

Star star_coverage(const ThreeTapInstance& inst, int center, const std::vector<int>& spokes) {
  Star s;
  s.center = center;
  s.cost = 0;
  std::vector<char> in_u(inst.graph.node_count(), 0);
  for (int u : spokes) {
    if (u == center) continue;
    auto c = inst.pair_cost(u, center);
    if (!c) {
      throw Error("star_coverage: no available link " + inst.graph.node_name(u) + "-" +
                  inst.graph.node_name(center));
    }
    s.spokes.push_back(u);
    s.cost += *c;
    in_u[u] = 1;
  }
  for (int e = 0; e < inst.graph.edge_count(); ++e) {
    auto [a, b] = inst.graph.edge(e);
    if (a == center || b == center) continue;  // edges at the center never count
    if (in_u[a] && in_u[b]) s.covered.push_back(e);
  }
  return s;
}

namespace {

// Plain BFS max-flow over exact rational capacities; sizes here are tiny.
class MaxFlow {
 public:
  explicit MaxFlow(int n) : head_(n, -1) {}
  void add_edge(int u, int v, const Rat& cap) {
    edges_.push_back({v, head_[u], cap});
    head_[u] = static_cast<int>(edges_.size()) - 1;
    edges_.push_back({u, head_[v], Rat(0)});
    head_[v] = static_cast<int>(edges_.size()) - 1;
  }
  Rat run(int s, int t) {
    Rat flow = 0;
    for (;;) {
      std::vector<int> pred_edge(head_.size(), -1);
      std::vector<char> seen(head_.size(), 0);
      std::vector<int> queue{s};
      seen[s] = 1;
      for (size_t i = 0; i < queue.size() && !seen[t]; ++i) {
        int u = queue[i];
        for (int e = head_[u]; e >= 0; e = edges_[e].next) {
          if (edges_[e].cap == 0 || seen[edges_[e].to]) continue;
          seen[edges_[e].to] = 1;
          pred_edge[edges_[e].to] = e;
          queue.push_back(edges_[e].to);
        }
      }
      if (!seen[t]) return flow;
      Rat aug;
      bool first = true;
      for (int v = t; v != s; v = edges_[pred_edge[v] ^ 1].to) {
        const Rat& c = edges_[pred_edge[v]].cap;
        if (first || c < aug) aug = c;
        first = false;
      }
      for (int v = t; v != s; v = edges_[pred_edge[v] ^ 1].to) {
        edges_[pred_edge[v]].cap -= aug;
        edges_[pred_edge[v] ^ 1].cap += aug;
      }
      flow += aug;
    }
  }
  std::vector<char> source_side(int s) const {
    std::vector<char> seen(head_.size(), 0);
    std::vector<int> queue{s};
    seen[s] = 1;
    for (size_t i = 0; i < queue.size(); ++i) {
      for (int e = head_[queue[i]]; e >= 0; e = edges_[e].next) {
        if (edges_[e].cap == 0 || seen[edges_[e].to]) continue;
        seen[edges_[e].to] = 1;
        queue.push_back(edges_[e].to);
      }
    }
    return seen;
  }

 private:
  struct Edge {
    int to, next;
    Rat cap;
  };
  std::vector<Edge> edges_;
  std::vector<int> head_;
};

// Node ids ordered by name; the deterministic center scan order.
std::vector<int> nodes_by_name(const TapInstance& g) {
  std::vector<int> order(g.node_count());
  for (int i = 0; i < g.node_count(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return g.node_name(a) < g.node_name(b); });
  return order;
}

}  // namespace

std::optional<Star> max_density_star(const ThreeTapInstance& inst, const std::set<int>& uncovered) {
  const TapInstance& g = inst.graph;
  const auto order = nodes_by_name(g);

  // Zero-cost stars with positive coverage take absolute priority.
  for (int v : order) {
    std::vector<int> zero;
    for (int u = 0; u < g.node_count(); ++u) {
      if (u == v) continue;
      auto c = inst.pair_cost(u, v);
      if (c && *c == 0) zero.push_back(u);
    }
    if (zero.empty()) continue;
    Star s = star_coverage(inst, v, zero);
    for (int e : s.covered) {
      if (uncovered.count(e)) {
        s.infinite_density = true;
        return s;
      }
    }
  }

  std::optional<Star> best;
  Rat best_density = 0;
  for (int v : order) {
    std::vector<int> zero, pos;
    std::vector<Rat> pos_cost;
    for (int u = 0; u < g.node_count(); ++u) {
      if (u == v) continue;
      auto c = inst.pair_cost(u, v);
      if (!c) continue;
      if (*c == 0) {
        zero.push_back(u);
      } else {
        pos.push_back(u);
        pos_cost.push_back(*c);
      }
    }
    std::vector<char> usable(g.node_count(), 0);
    for (int u : zero) usable[u] = 1;
    for (int u : pos) usable[u] = 1;
    std::vector<int> cand_edges;
    for (int e : uncovered) {
      auto [a, b] = g.edge(e);
      if (a == v || b == v) continue;
      if (usable[a] && usable[b]) cand_edges.push_back(e);
    }
    if (cand_edges.empty() || pos.empty()) continue;

    // Dinkelbach over the finite set of achievable densities: start from
    // the full spoke set and re-solve the parametric min-cut until no
    // strictly denser subset exists.
    std::vector<int> sel = pos;  // selected positive spokes
    auto eval = [&](const std::vector<int>& chosen) {
      std::vector<char> in_u(g.node_count(), 0);
      for (int u : zero) in_u[u] = 1;
      for (int u : chosen) in_u[u] = 1;
      long cov = 0;
      Rat cost = 0;
      for (int e : cand_edges) {
        auto [a, b] = g.edge(e);
        if (in_u[a] && in_u[b]) ++cov;
      }
      for (int u : chosen) {
        for (size_t i = 0; i < pos.size(); ++i) {
          if (pos[i] == u) cost += pos_cost[i];
        }
      }
      return std::make_pair(cov, cost);
    };
    auto [cov0, cost0] = eval(sel);
    if (cov0 == 0) continue;
    if (cost0 == 0) throw Error("zero-cost star escaped preprocessing (internal)");
    Rat lambda = Rat(cov0) / cost0;

    for (int iter = 0; iter < 1000; ++iter) {
      // max over S of cov(S) - lambda * cost(S) via min cut.
      int N = static_cast<int>(cand_edges.size() + pos.size()) + 2;
      int src = N - 2, snk = N - 1;
      MaxFlow mf(N);
      Rat inf = 0;
      for (size_t i = 0; i < cand_edges.size(); ++i) inf += 1;
      inf += 1;
      std::map<int, int> pos_index;
      for (size_t i = 0; i < pos.size(); ++i) pos_index[pos[i]] = static_cast<int>(i);
      for (size_t i = 0; i < cand_edges.size(); ++i) {
        mf.add_edge(src, static_cast<int>(i), Rat(1));
        auto [a, b] = g.edge(cand_edges[i]);
        for (int u : {a, b}) {
          auto it = pos_index.find(u);
          if (it != pos_index.end()) {
            mf.add_edge(static_cast<int>(i), static_cast<int>(cand_edges.size()) + it->second,
                        inf);
          }
        }
      }
      for (size_t i = 0; i < pos.size(); ++i) {
        mf.add_edge(static_cast<int>(cand_edges.size() + i), snk, lambda * pos_cost[i]);
      }
      Rat flow = mf.run(src, snk);
      Rat h = Rat(static_cast<long>(cand_edges.size())) - flow;
      if (h <= 0) break;
      auto side = mf.source_side(src);
      std::vector<int> chosen;
      for (size_t i = 0; i < pos.size(); ++i) {
        if (side[cand_edges.size() + i]) chosen.push_back(pos[i]);
      }
      auto [cov, cost] = eval(chosen);
      if (cost == 0 || cov == 0) break;
      Rat dens = Rat(cov) / cost;
      if (dens <= lambda) break;
      lambda = dens;
      sel = chosen;
    }

    auto [cov, cost] = eval(sel);
    if (cov == 0 || cost == 0) continue;
    Rat dens = Rat(cov) / cost;
    if (!best || dens > best_density) {
      std::vector<int> spokes = zero;
      spokes.insert(spokes.end(), sel.begin(), sel.end());
      std::sort(spokes.begin(), spokes.end());
      best = star_coverage(inst, v, spokes);
      best_density = dens;
    }
  }
  return best;
}

namespace {

// Cheapest link id for the pair, or -1 when only the tree edge exists.
int pair_link_id(const ThreeTapInstance& inst, int u, int v) {
  int best = -1;
  for (int l = 0; l < inst.graph.link_count(); ++l) {
    const Link& lk = inst.graph.link(l);
    bool same = (lk.u == u && lk.v == v) || (lk.u == v && lk.v == u);
    if (same && (best < 0 || lk.cost < inst.graph.link(best).cost)) best = l;
  }
  return best;
}

// Buys the spoke connection when it is a link (tree edges are free).
void buy_spoke(const ThreeTapInstance& inst, IntegralSolution& a, int u, int center) {
  if (inst.graph.edge_between(u, center) >= 0) return;
  int l = pair_link_id(inst, u, center);
  if (l < 0) throw Error("buy_spoke: unavailable pair (internal)");
  a.add(l);
}

}  // namespace

IntegralSolution greedy_3tap(const ThreeTapInstance& inst) {
  const TapInstance& g = inst.graph;
  for (int e = 0; e < g.edge_count(); ++e) {
    auto [a, b] = g.edge(e);
    bool ok = false;
    for (int v = 0; v < g.node_count() && !ok; ++v) {
      if (v != a && v != b && inst.pair_available(a, v) && inst.pair_available(b, v)) ok = true;
    }
    if (!ok) {
      throw Error("3TAP infeasible: edge " + g.edge_name(e) + " has no triangle candidate");
    }
  }

  IntegralSolution sol;
  // Free round: apply every zero-cost star that covers something new.
  {
    auto unc = uncovered_3tap(inst, sol);
    std::set<int> uncovered(unc.begin(), unc.end());
    for (int v : nodes_by_name(g)) {
      std::vector<int> zero;
      for (int u = 0; u < g.node_count(); ++u) {
        if (u == v) continue;
        auto c = inst.pair_cost(u, v);
        if (c && *c == 0) zero.push_back(u);
      }
      if (zero.empty()) continue;
      Star s = star_coverage(inst, v, zero);
      for (int e : s.covered) {
        if (!uncovered.count(e)) continue;
        auto [a, b] = g.edge(e);
        buy_spoke(inst, sol, a, v);
        buy_spoke(inst, sol, b, v);
        uncovered.erase(e);
      }
    }
  }

  for (;;) {
    auto unc = uncovered_3tap(inst, sol);
    if (unc.empty()) break;
    std::set<int> uncovered(unc.begin(), unc.end());
    auto star = max_density_star(inst, uncovered);
    if (!star) {
      throw Error("greedy_3tap stuck: no star covers " + g.edge_name(*uncovered.begin()) +
                  " (internal)");
    }
    for (int u : star->spokes) buy_spoke(inst, sol, u, star->center);
  }
  if (!is_feasible_3tap(inst, sol)) throw Error("greedy_3tap produced infeasible output");
  return sol;
}

ThreeTapInstance setcover_gadget(const SetCoverInstance& sc) {
  InstanceData d;
  const int k = static_cast<int>(sc.sets.size());
  const int n = sc.num_elements;
  auto set_name = [&](int i) { return "S" + std::to_string(i); };
  auto elem_name = [&](int j) { return "e" + std::to_string(j); };
  d.nodes = {"r", "s", "t"};
  for (int i = 0; i < k; ++i) d.nodes.push_back(set_name(i));
  for (int j = 0; j < n; ++j) d.nodes.push_back(elem_name(j));

  d.tree_edges.emplace_back("s", "r");
  if (k > 0) d.tree_edges.emplace_back("r", set_name(0));
  for (int i = 0; i + 1 < k; ++i) d.tree_edges.emplace_back(set_name(i), set_name(i + 1));
  d.tree_edges.emplace_back("r", "t");
  for (int j = 0; j < n; ++j) d.tree_edges.emplace_back("t", elem_name(j));

  Rat total = 1;
  for (const auto& s : sc.sets) total += s.cost;

  std::set<std::pair<std::string, std::string>> listed;
  auto add_link = [&](const std::string& u, const std::string& v, const Rat& cost) {
    d.links.push_back({u, v, cost});
    listed.insert({std::min(u, v), std::max(u, v)});
  };
  add_link("s", "r", Rat(0));
  add_link("s", "t", Rat(0));
  for (int i = 0; i < k; ++i) add_link("s", set_name(i), Rat(0));
  for (int i = 0; i < k; ++i) add_link("t", set_name(i), sc.sets[i].cost);
  for (int i = 0; i < k; ++i) {
    for (int e : sc.sets[i].elements) add_link(elem_name(e), set_name(i), Rat(0));
  }
  // All remaining node pairs carry the prohibitive cost so the oracle can
  // verify optima avoid them.
  std::set<std::pair<std::string, std::string>> tree;
  for (const auto& [u, v] : d.tree_edges) tree.insert({std::min(u, v), std::max(u, v)});
  for (size_t a = 0; a < d.nodes.size(); ++a) {
    for (size_t b = a + 1; b < d.nodes.size(); ++b) {
      auto key = std::make_pair(std::min(d.nodes[a], d.nodes[b]),
                                std::max(d.nodes[a], d.nodes[b]));
      if (tree.count(key) || listed.count(key)) continue;
      add_link(key.first, key.second, total);
    }
  }
  return ThreeTapInstance::make(d, false);
}

IntegralSolution unweighted_3tap(const ThreeTapInstance& inst) {
  if (!inst.unweighted) throw Error("unweighted_3tap requires an unweighted instance");
  const TapInstance& g = inst.graph;
  IntegralSolution sol;
  const auto order = nodes_by_name(g);
  for (int e = 0; e < g.edge_count(); ++e) {
    if (uncovered_3tap(inst, sol).empty()) break;
    auto unc = uncovered_3tap(inst, sol);
    if (std::find(unc.begin(), unc.end(), e) == unc.end()) continue;
    auto [a, b] = g.edge(e);
    int pick = -1;
    for (int v : order) {
      if (v != a && v != b && inst.pair_available(a, v) && inst.pair_available(b, v)) {
        pick = v;
        break;
      }
    }
    if (pick < 0) {
      throw Error("3TAP infeasible: edge " + g.edge_name(e) + " has no triangle candidate");
    }
    buy_spoke(inst, sol, a, pick);
    buy_spoke(inst, sol, b, pick);
  }
  if (!is_feasible_3tap(inst, sol)) {
    throw Error("unweighted_3tap: construction left an edge untriangulated (internal)");
  }
  // Minimality pass: drop any link whose removal keeps feasibility.
  for (int l : std::vector<int>(sol.chosen)) {
    IntegralSolution without;
    for (int m : sol.chosen) {
      if (m != l) without.add(m);
    }
    if (is_feasible_3tap(inst, without)) sol = without;
  }
  return sol;
}

}  // namespace tap
