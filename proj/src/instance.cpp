#include "tap/instance.hpp"

#include <algorithm>
#include <set>

namespace tap {

namespace {

// Union-find over node indices, for the spanning-tree check.
struct Dsu {
  std::vector<int> p;
  explicit Dsu(int n) : p(n) {
    for (int i = 0; i < n; ++i) p[i] = i;
  }
  int find(int x) { return p[x] == x ? x : p[x] = find(p[x]); }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    p[a] = b;
    return true;
  }
};

}  // namespace

std::vector<Violation> validate_instance(const InstanceData& data) {
  std::vector<Violation> out;
  std::map<std::string, int> ids;
  for (int i = 0; i < static_cast<int>(data.nodes.size()); ++i) {
    if (!ids.emplace(data.nodes[i], i).second) {
      out.push_back({"duplicate node", data.nodes[i]});
    }
  }
  auto known = [&](const std::string& name) { return ids.count(name) != 0; };

  int n = static_cast<int>(data.nodes.size());
  if (n == 0) {
    out.push_back({"empty instance", "no nodes"});
    return out;
  }
  Dsu dsu(n);
  bool cycle = false;
  int usable_edges = 0;
  for (const auto& [u, v] : data.tree_edges) {
    if (!known(u) || !known(v)) {
      out.push_back({"unknown node", u + "-" + v});
      continue;
    }
    if (u == v) {
      out.push_back({"self-loop tree edge", u});
      continue;
    }
    ++usable_edges;
    if (!dsu.unite(ids[u], ids[v])) cycle = true;
  }
  if (cycle) {
    out.push_back({"not a tree", "tree_edges contain a cycle"});
  }
  if (usable_edges != n - 1) {
    out.push_back({"not a tree", "expected " + std::to_string(n - 1) +
                                     " tree edges, found " + std::to_string(usable_edges)});
  } else if (!cycle) {
    int comp = dsu.find(0);
    for (int i = 1; i < n; ++i) {
      if (dsu.find(i) != comp) {
        out.push_back({"not a tree", "tree_edges do not connect all nodes"});
        break;
      }
    }
  }

  std::set<std::pair<std::pair<std::string, std::string>, std::string>> seen_links;
  for (const auto& l : data.links) {
    if (!known(l.u) || !known(l.v)) {
      out.push_back({"unknown node", l.u + "-" + l.v});
      continue;
    }
    if (l.u == l.v) {
      out.push_back({"self-loop link", l.u});
      continue;
    }
    if (l.cost < 0) {
      out.push_back({"negative cost", l.u + "-" + l.v + " cost " + rat_str(l.cost)});
    }
    auto key = std::make_pair(std::minmax(l.u, l.v), rat_str(l.cost));
    if (!seen_links.insert(key).second) {
      // Parallel links with distinct costs are fine; exact duplicates are not.
      out.push_back({"duplicate link", l.u + "-" + l.v + " cost " + rat_str(l.cost)});
    }
  }
  if (data.root && !known(*data.root)) {
    out.push_back({"unknown node", "root " + *data.root});
  }
  return out;
}

TapInstance TapInstance::make(const InstanceData& data) {
  auto violations = validate_instance(data);
  if (!violations.empty()) {
    std::string msg = "invalid instance:";
    for (const auto& v : violations) msg += " [" + v.kind + ": " + v.detail + "]";
    throw Error(msg);
  }

  TapInstance inst;
  inst.names_ = data.nodes;
  for (int i = 0; i < static_cast<int>(inst.names_.size()); ++i) {
    inst.ids_[inst.names_[i]] = i;
  }
  const int n = inst.node_count();

  inst.adj_.assign(n, {});
  std::vector<std::vector<int>> adj_edges(n);
  for (const auto& [u, v] : data.tree_edges) {
    int a = inst.ids_[u], b = inst.ids_[v];
    int e = static_cast<int>(inst.edges_.size());
    inst.edges_.emplace_back(a, b);
    inst.adj_[a].push_back(b);
    inst.adj_[b].push_back(a);
    adj_edges[a].push_back(e);
    adj_edges[b].push_back(e);
  }

  for (const auto& l : data.links) {
    inst.links_.push_back({inst.ids_[l.u], inst.ids_[l.v], l.cost});
  }

  if (data.root) {
    inst.root_ = inst.ids_[*data.root];
  } else {
    inst.root_ = static_cast<int>(
        std::min_element(inst.names_.begin(), inst.names_.end()) - inst.names_.begin());
  }

  // Rooted structure by BFS from the root.
  inst.parent_.assign(n, -1);
  inst.parent_edge_.assign(n, -1);
  inst.depth_.assign(n, 0);
  inst.children_.assign(n, {});
  std::vector<int> order{inst.root_};
  std::vector<char> seen(n, 0);
  seen[inst.root_] = 1;
  for (size_t i = 0; i < order.size(); ++i) {
    int v = order[i];
    for (size_t j = 0; j < inst.adj_[v].size(); ++j) {
      int w = inst.adj_[v][j];
      if (seen[w]) continue;
      seen[w] = 1;
      inst.parent_[w] = v;
      inst.parent_edge_[w] = adj_edges[v][j];
      inst.depth_[w] = inst.depth_[v] + 1;
      inst.children_[v].push_back(w);
      order.push_back(w);
    }
  }

  // Cover relation, cached per link and per edge.
  const int m = inst.link_count();
  inst.cover_sets_.assign(inst.edge_count(), {});
  inst.link_paths_.assign(m, {});
  inst.covers_.assign(m, std::vector<unsigned char>(inst.edge_count(), 0));
  inst.link_lca_.assign(m, -1);
  for (int l = 0; l < m; ++l) {
    inst.link_lca_[l] = inst.lca(inst.links_[l].u, inst.links_[l].v);
    inst.link_paths_[l] = inst.tree_path(inst.links_[l].u, inst.links_[l].v);
    for (int e : inst.link_paths_[l]) {
      inst.cover_sets_[e].push_back(l);
      inst.covers_[l][e] = 1;
    }
  }
  return inst;
}

int TapInstance::node_id(const std::string& name) const {
  auto it = ids_.find(name);
  if (it == ids_.end()) throw Error("unknown node '" + name + "'");
  return it->second;
}

std::string TapInstance::edge_name(int e) const {
  return names_[edges_[e].first] + "-" + names_[edges_[e].second];
}

int TapInstance::edge_between(int u, int v) const {
  for (int e = 0; e < edge_count(); ++e) {
    if ((edges_[e].first == u && edges_[e].second == v) ||
        (edges_[e].first == v && edges_[e].second == u)) {
      return e;
    }
  }
  return -1;
}

int TapInstance::lca(int u, int v) const {
  while (u != v) {
    if (depth_[u] < depth_[v]) std::swap(u, v);
    u = parent_[u];
  }
  return u;
}

std::vector<int> TapInstance::tree_path(int u, int v) const {
  if (u < 0 || u >= node_count() || v < 0 || v >= node_count()) {
    throw Error("tree_path: node id out of range");
  }
  int a = lca(u, v);
  std::vector<int> up, down;
  for (int w = u; w != a; w = parent_[w]) up.push_back(parent_edge_[w]);
  for (int w = v; w != a; w = parent_[w]) down.push_back(parent_edge_[w]);
  up.insert(up.end(), down.rbegin(), down.rend());
  return up;
}

bool TapInstance::is_binary() const {
  for (int v = 0; v < node_count(); ++v) {
    int d = degree(v);
    if (d != 1 && d != 3) return false;
  }
  return true;
}

bool TapInstance::links_leaf_to_leaf() const {
  for (const auto& l : links_) {
    if (degree(l.u) != 1 || degree(l.v) != 1) return false;
  }
  return true;
}

int TapInstance::edge_child(int e) const {
  auto [a, b] = edges_[e];
  return depth_[a] > depth_[b] ? a : b;
}

int TapInstance::edge_parent_node(int e) const {
  auto [a, b] = edges_[e];
  return depth_[a] > depth_[b] ? b : a;
}

bool IntegralSolution::contains(int l) const {
  return std::binary_search(chosen.begin(), chosen.end(), l);
}

void IntegralSolution::add(int l) {
  auto it = std::lower_bound(chosen.begin(), chosen.end(), l);
  if (it == chosen.end() || *it != l) chosen.insert(it, l);
}

Rat FractionalSolution::value(int l) const {
  auto it = values.find(l);
  return it == values.end() ? Rat(0) : it->second;
}

void FractionalSolution::set(int l, const Rat& r) {
  if (r == 0) {
    values.erase(l);
  } else {
    values[l] = r;
  }
}

FractionalSolution to_fractional(const IntegralSolution& a) {
  FractionalSolution x;
  for (int l : a.chosen) x.values[l] = 1;
  return x;
}

FractionalSolution add(const FractionalSolution& x, const FractionalSolution& y) {
  FractionalSolution out = x;
  for (const auto& [l, r] : y.values) out.set(l, out.value(l) + r);
  return out;
}

FractionalSolution scale(const FractionalSolution& x, const Rat& s) {
  FractionalSolution out;
  for (const auto& [l, r] : x.values) out.set(l, r * s);
  return out;
}

Rat coverage(const TapInstance& inst, const FractionalSolution& x, int e) {
  if (e < 0 || e >= inst.edge_count()) throw Error("coverage: unknown edge");
  Rat total = 0;
  for (int l : inst.cover_set(e)) total += x.value(l);
  return total;
}

bool is_feasible_cover(const TapInstance& inst, const IntegralSolution& a) {
  for (int e = 0; e < inst.edge_count(); ++e) {
    bool covered = false;
    for (int l : inst.cover_set(e)) {
      if (a.contains(l)) {
        covered = true;
        break;
      }
    }
    if (!covered) return false;
  }
  return true;
}

Rat cost_of(const TapInstance& inst, const IntegralSolution& a) {
  Rat total = 0;
  for (int l : a.chosen) total += inst.link(l).cost;
  return total;
}

Rat cost_of(const TapInstance& inst, const FractionalSolution& x) {
  Rat total = 0;
  for (const auto& [l, r] : x.values) {
    if (l < 0 || l >= inst.link_count()) throw Error("cost: unknown link id");
    total += inst.link(l).cost * r;
  }
  return total;
}

}  // namespace tap
