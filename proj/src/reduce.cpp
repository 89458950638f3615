#include "tap/reduce.hpp"

#include <algorithm>
#include <json.hpp>
#include <set>

#include "tap/io.hpp"

namespace tap {

namespace {

std::string fresh_name(std::set<std::string>& taken, const std::string& base) {
  std::string name = base;
  while (taken.count(name)) name += "'";
  taken.insert(name);
  return name;
}

}  // namespace

Reduction binarize(const TapInstance& inst) {
  // Nodes of degree >= 2 are processed top-down; leaves are untouched. The
  // parent-side edge of every original node is emitted in a final pass from
  // its current attachment point, which a transformed parent redirects to
  // its chain.
  std::set<std::string> taken(inst.node_names().begin(), inst.node_names().end());
  std::vector<std::string> new_nodes = inst.node_names();
  const std::string root_name = inst.node_name(inst.root());
  std::vector<int> bfs{inst.root()};
  for (size_t i = 0; i < bfs.size(); ++i) {
    for (int c : inst.children(bfs[i])) bfs.push_back(c);
  }
  // attach[c] = node the parent-side edge of original node c hangs from;
  // entry[v] = node that v's parent-side edge reaches (v itself, or its v0').
  std::map<std::string, std::string> attach, entry;
  for (int v : bfs) {
    entry[inst.node_name(v)] = inst.node_name(v);
    for (int c : inst.children(v)) attach[inst.node_name(c)] = inst.node_name(v);
  }

  std::vector<std::pair<std::string, std::string>> edges;
  InstanceData out;
  ReductionMap map;
  map.kind = ReductionMap::binarize;
  for (int l = 0; l < inst.link_count(); ++l) {
    const Link& lk = inst.link(l);
    out.links.push_back({inst.node_name(lk.u), inst.node_name(lk.v), lk.cost});
    map.link_correspondence[l] = l;
  }
  for (const auto& n : inst.node_names()) map.node_correspondence[n] = n;

  for (int vid : bfs) {
    if (inst.degree(vid) < 2) continue;  // leaves are untouched
    const std::string v0 = inst.node_name(vid);
    std::vector<std::string> kids;
    for (int c : inst.children(vid)) kids.push_back(inst.node_name(c));
    const int k = static_cast<int>(kids.size());

    std::string prev;
    if (vid == inst.root()) {
      prev = v0;  // the root hangs directly off the head of its chain
    } else {
      std::string v0p = fresh_name(taken, v0 + "'0");
      new_nodes.push_back(v0p);
      entry[v0] = v0p;
      edges.emplace_back(v0p, v0);
      prev = v0p;
    }
    for (int i = 1; i <= k + 1; ++i) {
      std::string pi = fresh_name(taken, v0 + "'" + std::to_string(i));
      new_nodes.push_back(pi);
      edges.emplace_back(prev, pi);
      if (i <= k) attach[kids[i - 1]] = pi;
      prev = pi;
    }
    // The zero-cost dummy link from v_0 to the chain tail covers the chain
    // and the v0'-v0 edge; it is the only link covering the tail edge.
    map.dummy_links.push_back(static_cast<int>(out.links.size()));
    out.links.push_back({v0, prev, Rat(0)});
  }

  for (int v : bfs) {
    const std::string name = inst.node_name(v);
    if (v == inst.root()) continue;
    edges.emplace_back(attach[name], entry[name]);
  }

  out.nodes = new_nodes;
  out.tree_edges = edges;
  out.root = root_name;
  TapInstance transformed = TapInstance::make(out);
  return {std::move(out), std::move(transformed), std::move(map)};
}

Reduction node_gadget_expand(const TapInstance& inst) {
  if (!inst.is_binary() || !inst.links_leaf_to_leaf()) {
    throw Error("node_gadget_expand requires a binary instance with leaf-to-leaf links");
  }
  std::set<std::string> taken(inst.node_names().begin(), inst.node_names().end());
  InstanceData out;
  ReductionMap map;
  map.kind = ReductionMap::node_gadget;
  for (int l = 0; l < inst.link_count(); ++l) {
    const Link& lk = inst.link(l);
    out.links.push_back({inst.node_name(lk.u), inst.node_name(lk.v), lk.cost});
    map.link_correspondence[l] = l;
  }
  for (const auto& n : inst.node_names()) map.node_correspondence[n] = n;

  out.nodes = inst.node_names();
  // a-node of internal node v facing neighbor w
  std::map<std::pair<int, int>, std::string> a_node;
  for (int v = 0; v < inst.node_count(); ++v) {
    if (inst.degree(v) != 3) continue;
    const auto& nbrs = inst.neighbors(v);
    std::vector<std::string> bs;
    for (int i = 0; i < 3; ++i) {
      std::string a = fresh_name(taken, inst.node_name(v) + ".a" + std::to_string(i + 1));
      std::string b = fresh_name(taken, inst.node_name(v) + ".b" + std::to_string(i + 1));
      out.nodes.push_back(a);
      out.nodes.push_back(b);
      a_node[{v, nbrs[i]}] = a;
      out.tree_edges.emplace_back(inst.node_name(v), a);
      out.tree_edges.emplace_back(a, b);
      bs.push_back(b);
    }
    map.dummy_links.push_back(static_cast<int>(out.links.size()));
    out.links.push_back({bs[0], bs[1], Rat(0)});
    map.dummy_links.push_back(static_cast<int>(out.links.size()));
    out.links.push_back({bs[1], bs[2], Rat(0)});
  }
  for (int e = 0; e < inst.edge_count(); ++e) {
    auto [u, w] = inst.edge(e);
    auto it_u = a_node.find({u, w});
    auto it_w = a_node.find({w, u});
    std::string eu = it_u == a_node.end() ? inst.node_name(u) : it_u->second;
    std::string ew = it_w == a_node.end() ? inst.node_name(w) : it_w->second;
    out.tree_edges.emplace_back(eu, ew);
  }
  out.root = inst.node_name(inst.root());
  TapInstance transformed = TapInstance::make(out);
  return {std::move(out), std::move(transformed), std::move(map)};
}

IntegralSolution push_solution(const TapInstance& original, const TapInstance& transformed,
                               const ReductionMap& map, const IntegralSolution& a) {
  if (!is_feasible_cover(original, a)) {
    throw Error("push_solution: input is not feasible for the original instance");
  }
  IntegralSolution out;
  for (int l : a.chosen) out.add(map.link_correspondence.at(l));
  for (int d : map.dummy_links) out.add(d);
  if (!is_feasible_cover(transformed, out)) {
    throw Error("push_solution: pushed solution is infeasible (internal error)");
  }
  return out;
}

IntegralSolution lift_solution(const TapInstance& original, const TapInstance& transformed,
                               const ReductionMap& map, const IntegralSolution& a_t) {
  if (!is_feasible_cover(transformed, a_t)) {
    throw Error("lift_solution: input is not feasible for the transformed instance");
  }
  std::map<int, int> back;
  for (const auto& [orig, trans] : map.link_correspondence) back[trans] = orig;
  IntegralSolution out;
  for (int l : a_t.chosen) {
    auto it = back.find(l);
    if (it != back.end()) out.add(it->second);
  }
  if (!is_feasible_cover(original, out)) {
    throw Error("lift_solution: lifted solution is infeasible (internal error)");
  }
  return out;
}

FractionalSolution push_fractional(const ReductionMap& map, const FractionalSolution& x) {
  FractionalSolution out;
  for (const auto& [l, r] : x.values) out.set(map.link_correspondence.at(l), r);
  for (int d : map.dummy_links) out.set(d, Rat(1));
  return out;
}

FractionalSolution lift_fractional(const ReductionMap& map, const FractionalSolution& x_t) {
  std::map<int, int> back;
  for (const auto& [orig, trans] : map.link_correspondence) back[trans] = orig;
  FractionalSolution out;
  for (const auto& [l, r] : x_t.values) {
    auto it = back.find(l);
    if (it != back.end()) out.set(it->second, r);
  }
  return out;
}

std::string reduction_map_to_json(const ReductionMap& map) {
  nlohmann::json j;
  j["kind"] = map.kind == ReductionMap::binarize ? "binarize" : "node_gadget";
  j["dummy_links"] = map.dummy_links;
  j["link_correspondence"] = nlohmann::json::object();
  for (const auto& [a, b] : map.link_correspondence) {
    j["link_correspondence"][std::to_string(a)] = b;
  }
  j["node_correspondence"] = map.node_correspondence;
  return j.dump(2) + "\n";
}

ReductionMap reduction_map_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  ReductionMap map;
  map.kind = j.at("kind").get<std::string>() == "binarize" ? ReductionMap::binarize
                                                           : ReductionMap::node_gadget;
  for (const auto& d : j.at("dummy_links")) map.dummy_links.push_back(d.get<int>());
  for (const auto& [k, v] : j.at("link_correspondence").items()) {
    map.link_correspondence[std::stoi(k)] = v.get<int>();
  }
  for (const auto& [k, v] : j.at("node_correspondence").items()) {
    map.node_correspondence[k] = v.get<std::string>();
  }
  return map;
}

}  // namespace tap
