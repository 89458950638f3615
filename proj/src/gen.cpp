#include "tap/gen.hpp"

#include <algorithm>
#include <json.hpp>
#include <set>

namespace tap {

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t salt) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

namespace {

std::string padded(const std::string& prefix, int i) {
  std::string s = std::to_string(i);
  while (s.size() < 2) s = "0" + s;
  return prefix + s;
}

}  // namespace

InstanceData gen_random_binary(int nodes, std::uint64_t seed, long cost_lo, long cost_hi,
                               int extra_links) {
  if (nodes < 2) throw Error("gen_random_binary: need at least 2 nodes");
  if (nodes % 2 != 0) --nodes;  // binary trees have an even node count
  Rng rng(seed);

  // Grow by splitting a random edge: the new internal node keeps all degrees
  // in {1,3}.
  std::vector<std::pair<int, int>> edges{{0, 1}};
  int next_node = 2;
  while (next_node < nodes) {
    int e = static_cast<int>(rng.uniform(0, static_cast<long>(edges.size()) - 1));
    auto [u, v] = edges[e];
    int mid = next_node++;
    int leaf = next_node++;
    edges[e] = {u, mid};
    edges.push_back({mid, v});
    edges.push_back({mid, leaf});
  }

  InstanceData data;
  for (int i = 0; i < nodes; ++i) data.nodes.push_back(padded("n", i));
  std::vector<int> degree(nodes, 0);
  for (auto [u, v] : edges) {
    data.tree_edges.emplace_back(data.nodes[u], data.nodes[v]);
    ++degree[u];
    ++degree[v];
  }
  std::vector<int> leaves;
  for (int i = 0; i < nodes; ++i) {
    if (degree[i] == 1) leaves.push_back(i);
  }

  auto cost = [&]() { return Rat(rng.uniform(cost_lo, cost_hi)); };
  std::set<std::pair<int, int>> used;
  auto add_link = [&](int a, int b) {
    auto key = std::minmax(a, b);
    if (a == b || used.count(key)) return;
    used.insert(key);
    data.links.push_back({data.nodes[a], data.nodes[b], cost()});
  };
  // Leaf cycle: guarantees every tree edge is coverable.
  for (size_t i = 0; i < leaves.size(); ++i) {
    add_link(leaves[i], leaves[(i + 1) % leaves.size()]);
  }
  for (int i = 0; i < extra_links; ++i) {
    int a = leaves[rng.uniform(0, static_cast<long>(leaves.size()) - 1)];
    int b = leaves[rng.uniform(0, static_cast<long>(leaves.size()) - 1)];
    add_link(a, b);
  }
  return data;
}

InstanceData gen_caterpillar(int nodes, std::uint64_t seed, long cost_lo, long cost_hi) {
  if (nodes < 4) throw Error("gen_caterpillar: need at least 4 nodes");
  int spine = (nodes + 2 + 1) / 2;  // ceil((n+2)/2)
  int hanging = nodes - spine;
  if (hanging > spine - 2) throw Error("gen_caterpillar: bad shape");

  InstanceData data;
  std::vector<std::string> vs, us;
  for (int i = 0; i < spine; ++i) vs.push_back(padded("v", i));
  for (int i = 1; i <= hanging; ++i) us.push_back(padded("u", i));
  data.nodes = vs;
  data.nodes.insert(data.nodes.end(), us.begin(), us.end());
  for (int i = 0; i + 1 < spine; ++i) data.tree_edges.emplace_back(vs[i], vs[i + 1]);
  for (int i = 0; i < hanging; ++i) data.tree_edges.emplace_back(vs[i + 1], us[i]);

  Rng rng(seed);
  auto cost = [&]() { return seed == 0 ? Rat(1) : Rat(rng.uniform(cost_lo, cost_hi)); };
  // Chain across the hanging leaves with both spine ends, the chord parallel
  // to the first spine edge, and one skew chord per interior leaf.
  if (hanging > 0) {
    data.links.push_back({vs[0], us[0], cost()});
    for (int i = 0; i + 1 < hanging; ++i) data.links.push_back({us[i], us[i + 1], cost()});
    data.links.push_back({us[hanging - 1], vs[spine - 1], cost()});
    data.links.push_back({vs[0], vs[1], cost()});
    for (int i = 0; i + 1 < hanging; ++i) data.links.push_back({us[i], vs[i + 2], cost()});
  } else {
    data.links.push_back({vs[0], vs[spine - 1], cost()});
  }
  return data;
}

InstanceData gen_star(int leaves) {
  if (leaves < 2) throw Error("gen_star: need at least 2 leaves");
  InstanceData data;
  data.nodes.push_back("c");
  for (int i = 0; i < leaves; ++i) data.nodes.push_back(padded("x", i));
  for (int i = 0; i < leaves; ++i) data.tree_edges.emplace_back("c", data.nodes[i + 1]);
  for (int i = 0; i < leaves; ++i) {
    for (int j = i + 1; j < leaves; ++j) {
      data.links.push_back({data.nodes[i + 1], data.nodes[j + 1], Rat(1)});
    }
  }
  return data;
}

InstanceData gen_fig2() { return gen_caterpillar(8); }

SetCoverInstance gen_random_setcover(std::uint64_t seed, int max_sets, int max_elements,
                                     long cost_lo, long cost_hi) {
  Rng rng(seed);
  SetCoverInstance sc;
  sc.num_elements = static_cast<int>(rng.uniform(1, max_elements));
  int num_sets = static_cast<int>(rng.uniform(1, max_sets));
  for (int s = 0; s < num_sets; ++s) {
    SetCoverInstance::SetEntry entry;
    entry.name = padded("S", s);
    entry.cost = Rat(rng.uniform(cost_lo, cost_hi));
    for (int e = 0; e < sc.num_elements; ++e) {
      if (rng.uniform(0, 1) == 1) entry.elements.push_back(e);
    }
    sc.sets.push_back(std::move(entry));
  }
  // Ensure feasibility: every element lands in at least one set.
  for (int e = 0; e < sc.num_elements; ++e) {
    bool covered = false;
    for (const auto& s : sc.sets) {
      covered = covered || std::count(s.elements.begin(), s.elements.end(), e) > 0;
    }
    if (!covered) {
      auto& s = sc.sets[rng.uniform(0, static_cast<long>(sc.sets.size()) - 1)];
      s.elements.push_back(e);
      std::sort(s.elements.begin(), s.elements.end());
    }
  }
  return sc;
}

SetCoverInstance setcover_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  SetCoverInstance sc;
  sc.num_elements = j.at("num_elements").get<int>();
  for (const auto& s : j.at("sets")) {
    SetCoverInstance::SetEntry entry;
    entry.name = s.at("name").get<std::string>();
    entry.cost = s.at("cost").is_string() ? parse_rat(s.at("cost").get<std::string>())
                                          : Rat(s.at("cost").get<long long>());
    for (const auto& e : s.at("elements")) entry.elements.push_back(e.get<int>());
    sc.sets.push_back(std::move(entry));
  }
  return sc;
}

std::string setcover_to_json(const SetCoverInstance& sc) {
  nlohmann::json j;
  j["num_elements"] = sc.num_elements;
  j["sets"] = nlohmann::json::array();
  for (const auto& s : sc.sets) {
    j["sets"].push_back({{"name", s.name}, {"cost", rat_str(s.cost)}, {"elements", s.elements}});
  }
  return j.dump(2) + "\n";
}

}  // namespace tap
