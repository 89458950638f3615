#include "tap/io.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>

namespace tap {

using nlohmann::json;

namespace {

Rat rat_from_json(const json& j) {
  if (j.is_string()) return parse_rat(j.get<std::string>());
  if (j.is_number_integer()) return Rat(j.get<long long>());
  throw Error("expected integer or \"p/q\" string, got " + j.dump());
}

}  // namespace

InstanceData instance_from_json(const std::string& text) {
  json j = json::parse(text);
  InstanceData data;
  for (const auto& n : j.at("nodes")) data.nodes.push_back(n.get<std::string>());
  for (const auto& e : j.at("tree_edges")) {
    data.tree_edges.emplace_back(e.at(0).get<std::string>(), e.at(1).get<std::string>());
  }
  if (j.contains("links")) {
    for (const auto& l : j.at("links")) {
      data.links.push_back({l.at("u").get<std::string>(), l.at("v").get<std::string>(),
                            rat_from_json(l.at("cost"))});
    }
  }
  if (j.contains("root") && !j.at("root").is_null()) {
    data.root = j.at("root").get<std::string>();
  }
  return data;
}

std::string instance_to_json(const InstanceData& data) {
  json j;
  j["nodes"] = data.nodes;
  j["tree_edges"] = json::array();
  for (const auto& [u, v] : data.tree_edges) j["tree_edges"].push_back({u, v});
  j["links"] = json::array();
  for (const auto& l : data.links) {
    j["links"].push_back({{"u", l.u}, {"v", l.v}, {"cost", rat_str(l.cost)}});
  }
  if (data.root) j["root"] = *data.root;
  return j.dump(2) + "\n";
}

InstanceData load_instance_file(const std::string& path) {
  return instance_from_json(read_file(path));
}

void save_instance_file(const InstanceData& data, const std::string& path) {
  write_file(path, instance_to_json(data));
}

InstanceData to_data(const TapInstance& inst) {
  InstanceData data;
  data.nodes = inst.node_names();
  for (int e = 0; e < inst.edge_count(); ++e) {
    auto [a, b] = inst.edge(e);
    data.tree_edges.emplace_back(inst.node_name(a), inst.node_name(b));
  }
  for (const auto& l : inst.links()) {
    data.links.push_back({inst.node_name(l.u), inst.node_name(l.v), l.cost});
  }
  data.root = inst.node_name(inst.root());
  return data;
}

FractionalSolution solution_from_json(const TapInstance& inst, const std::string& text) {
  json j = json::parse(text);
  FractionalSolution x;
  std::vector<char> used(inst.link_count(), 0);
  for (const auto& entry : j.at("links")) {
    Rat value = rat_from_json(entry.at("value"));
    int id = -1;
    if (entry.contains("id")) {
      id = entry.at("id").get<int>();
      if (id < 0 || id >= inst.link_count()) throw Error("solution: link id out of range");
    } else {
      int u = inst.node_id(entry.at("u").get<std::string>());
      int v = inst.node_id(entry.at("v").get<std::string>());
      for (int l = 0; l < inst.link_count(); ++l) {
        const Link& lk = inst.link(l);
        bool same = (lk.u == u && lk.v == v) || (lk.u == v && lk.v == u);
        if (same && !used[l]) {
          id = l;
          break;
        }
      }
      if (id < 0) throw Error("solution references unknown link " + entry.dump());
    }
    used[id] = 1;
    x.set(id, value);
  }
  return x;
}

std::string solution_to_json(const TapInstance& inst, const FractionalSolution& x) {
  json j;
  j["links"] = json::array();
  for (const auto& [l, r] : x.values) {
    const Link& lk = inst.link(l);
    j["links"].push_back({{"u", inst.node_name(lk.u)},
                          {"v", inst.node_name(lk.v)},
                          {"value", rat_str(r)},
                          {"id", l}});
  }
  return j.dump(2) + "\n";
}

std::string solution_to_json(const TapInstance& inst, const IntegralSolution& a) {
  return solution_to_json(inst, to_fractional(a));
}

FractionalSolution load_solution_file(const TapInstance& inst, const std::string& path) {
  return solution_from_json(inst, read_file(path));
}

IntegralSolution integral_from_fractional(const FractionalSolution& x) {
  IntegralSolution a;
  for (const auto& [l, r] : x.values) {
    if (r == 1) {
      a.add(l);
    } else if (r != 0) {
      throw Error("solution is not integral at link " + std::to_string(l));
    }
  }
  return a;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out << text;
}

}  // namespace tap
