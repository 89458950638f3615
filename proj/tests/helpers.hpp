#pragma once

// Shared test helpers: small instance builders, independent oracles, and
// random feasible-solution generators. Oracles here deliberately avoid the
// library code paths they cross-check.

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "tap/gen.hpp"
#include "tap/instance.hpp"

namespace test_helpers {

using namespace tap;

inline InstanceData path3() {
  InstanceData d;
  d.nodes = {"a", "b", "c"};
  d.tree_edges = {{"a", "b"}, {"b", "c"}};
  d.links.push_back({"a", "c", Rat(1)});
  return d;
}

inline InstanceData star3() { return gen_star(3); }

// Builds an instance from terse specs: nodes "a b c", edges "a-b b-c",
// links "a-c:1 b-c:1/2".
inline InstanceData make_data(const std::string& nodes, const std::string& edges,
                              const std::string& links, const std::string& root = "") {
  InstanceData d;
  auto split = [](const std::string& s) {
    std::vector<std::string> out;
    std::string tok;
    for (char c : s + " ") {
      if (c == ' ') {
        if (!tok.empty()) out.push_back(tok);
        tok.clear();
      } else {
        tok += c;
      }
    }
    return out;
  };
  d.nodes = split(nodes);
  for (const auto& e : split(edges)) {
    auto dash = e.find('-');
    d.tree_edges.emplace_back(e.substr(0, dash), e.substr(dash + 1));
  }
  for (const auto& l : split(links)) {
    auto dash = l.find('-');
    auto colon = l.find(':');
    Rat cost = colon == std::string::npos ? Rat(1) : parse_rat(l.substr(colon + 1));
    std::string v = colon == std::string::npos ? l.substr(dash + 1)
                                               : l.substr(dash + 1, colon - dash - 1);
    d.links.push_back({l.substr(0, dash), v, cost});
  }
  if (!root.empty()) d.root = root;
  return d;
}

// Independent two-edge-connectivity check on tree + chosen links: low-link
// bridge finding over the multigraph, tracking edge ids so parallel edges
// are honored.
inline bool two_edge_connected(const TapInstance& inst, const IntegralSolution& a) {
  int n = inst.node_count();
  struct E {
    int to, id;
  };
  std::vector<std::vector<E>> adj(n);
  int eid = 0;
  for (int e = 0; e < inst.edge_count(); ++e) {
    auto [u, v] = inst.edge(e);
    adj[u].push_back({v, eid});
    adj[v].push_back({u, eid});
    ++eid;
  }
  for (int l : a.chosen) {
    const Link& lk = inst.link(l);
    adj[lk.u].push_back({lk.v, eid});
    adj[lk.v].push_back({lk.u, eid});
    ++eid;
  }
  std::vector<int> disc(n, -1), low(n, 0);
  int timer = 0;
  bool bridge = false;
  // Iterative DFS to dodge recursion limits on paths.
  struct Frame {
    int v, parent_edge;
    size_t next = 0;
  };
  std::vector<Frame> stack{{inst.root(), -1}};
  disc[inst.root()] = low[inst.root()] = timer++;
  while (!stack.empty()) {
    Frame& f = stack.back();
    if (f.next < adj[f.v].size()) {
      E e = adj[f.v][f.next++];
      if (e.id == f.parent_edge) continue;
      if (disc[e.to] == -1) {
        disc[e.to] = low[e.to] = timer++;
        stack.push_back({e.to, e.id});
      } else {
        low[f.v] = std::min(low[f.v], disc[e.to]);
      }
    } else {
      int v = f.v;
      int pe = f.parent_edge;
      stack.pop_back();
      if (!stack.empty()) {
        int p = stack.back().v;
        low[p] = std::min(low[p], low[v]);
        if (low[v] > disc[p]) bridge = true;
      }
      (void)pe;
    }
  }
  for (int v = 0; v < n; ++v) {
    if (disc[v] == -1) return false;  // disconnected
  }
  return !bridge;
}

// Random integral solution: each link joins with probability num/den.
inline IntegralSolution random_subset(const TapInstance& inst, Rng& rng, long num = 1,
                                      long den = 2) {
  IntegralSolution a;
  for (int l = 0; l < inst.link_count(); ++l) {
    if (rng.uniform(1, den) <= num) a.add(l);
  }
  return a;
}

// Random feasible integral cover: random subset repaired edge by edge.
inline IntegralSolution random_feasible_cover(const TapInstance& inst, Rng& rng) {
  IntegralSolution a = random_subset(inst, rng);
  for (int e = 0; e < inst.edge_count(); ++e) {
    bool covered = false;
    for (int l : inst.cover_set(e)) {
      if (a.contains(l)) covered = true;
    }
    if (!covered) {
      const auto& cs = inst.cover_set(e);
      a.add(cs[rng.uniform(0, static_cast<long>(cs.size()) - 1)]);
    }
  }
  return a;
}

// Random EDGE-LP-feasible fractional vector: a feasible cover at value 1
// plus random rational noise on other links.
inline FractionalSolution random_feasible_fractional(const TapInstance& inst, Rng& rng) {
  FractionalSolution x = to_fractional(random_feasible_cover(inst, rng));
  for (int l = 0; l < inst.link_count(); ++l) {
    if (x.value(l) == 0 && rng.uniform(0, 2) == 0) {
      x.set(l, Rat(rng.uniform(1, 4), rng.uniform(2, 6)));
    }
  }
  return x;
}

// Random feasible unweighted triangle-augmentation instance: random tree,
// random unit links, repaired so every tree edge has a midpoint candidate.
inline InstanceData random_unweighted_3tap_data(int nodes, std::uint64_t seed) {
  Rng rng(seed);
  InstanceData d;
  for (int i = 0; i < nodes; ++i) {
    d.nodes.push_back("n" + std::string(i < 10 ? "0" : "") + std::to_string(i));
  }
  for (int i = 1; i < nodes; ++i) {
    int p = static_cast<int>(rng.uniform(0, i - 1));
    d.tree_edges.emplace_back(d.nodes[p], d.nodes[i]);
  }
  std::set<std::pair<int, int>> used;
  auto tree_adj = [&](int a, int b) {
    for (auto& [u, v] : d.tree_edges) {
      if ((u == d.nodes[a] && v == d.nodes[b]) || (u == d.nodes[b] && v == d.nodes[a])) {
        return true;
      }
    }
    return false;
  };
  auto add = [&](int a, int b) {
    auto key = std::minmax(a, b);
    if (a == b || used.count(key) || tree_adj(a, b)) return;
    used.insert(key);
    d.links.push_back({d.nodes[a], d.nodes[b], Rat(1)});
  };
  for (int i = 0; i < 2 * nodes; ++i) {
    add(static_cast<int>(rng.uniform(0, nodes - 1)), static_cast<int>(rng.uniform(0, nodes - 1)));
  }
  auto avail = [&](int p, int q) { return tree_adj(p, q) || used.count(std::minmax(p, q)) > 0; };
  for (auto& [u, v] : d.tree_edges) {
    int a = -1, b = -1;
    for (int i = 0; i < nodes; ++i) {
      if (d.nodes[i] == u) a = i;
      if (d.nodes[i] == v) b = i;
    }
    bool has_candidate = false;
    for (int w = 0; w < nodes && !has_candidate; ++w) {
      has_candidate = w != a && w != b && avail(a, w) && avail(b, w);
    }
    if (!has_candidate) {
      for (int w = 0; w < nodes; ++w) {
        if (w != a && w != b) {
          add(a, w);
          add(b, w);
          break;
        }
      }
    }
  }
  return d;
}

}  // namespace test_helpers
