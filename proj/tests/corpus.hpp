#pragma once

// Constructed NODE-LP-feasible solutions with prescribed deficiency
// profiles. A small targeting LP pins the coverage of the chosen path edges
// into [1, 4/3) and everything else at >= 4/3, plus optional rows steering
// the long-link copy counts into a specific two-path case.

#include <optional>
#include <set>
#include <vector>

#include "helpers.hpp"
#include "tap/deficient.hpp"
#include "tap/lp.hpp"

namespace test_corpus {

using namespace tap;

enum class TwoPathCase { any, few_longs, many_longs, saturated };

struct ProfileTarget {
  std::vector<int> p1_edges;
  std::vector<int> p2_edges;  // empty for one-path targets
  TwoPathCase kind = TwoPathCase::any;
};

// Edges of the tree path between the closest endpoints of the two target
// paths; empty when they touch.
inline std::vector<int> connecting_edges(const TapInstance& inst, const std::vector<int>& p1,
                                         const std::vector<int>& p2) {
  std::set<int> nodes1, nodes2;
  for (int e : p1) {
    nodes1.insert(inst.edge(e).first);
    nodes1.insert(inst.edge(e).second);
  }
  for (int e : p2) {
    nodes2.insert(inst.edge(e).first);
    nodes2.insert(inst.edge(e).second);
  }
  std::vector<int> best;
  bool found = false;
  for (int a : nodes1) {
    for (int b : nodes2) {
      auto p = inst.tree_path(a, b);
      if (!found || p.size() < best.size()) {
        best = p;
        found = true;
      }
    }
  }
  return best;
}

// Builds and solves the targeting LP; returns the solution when it realizes
// the profile exactly.
inline std::optional<FractionalSolution> solve_profile_lp(const TapInstance& inst,
                                                          const ProfileTarget& target,
                                                          std::uint64_t seed) {
  std::set<int> deficient(target.p1_edges.begin(), target.p1_edges.end());
  deficient.insert(target.p2_edges.begin(), target.p2_edges.end());

  LinearProgram lp;
  lp.num_vars = inst.link_count();
  lp.objective.assign(lp.num_vars, Rat(1));
  auto add_row = [&](const std::vector<std::pair<int, Rat>>& coeffs, const Rat& rhs,
                     const std::string& label) {
    Constraint c;
    c.coeffs = coeffs;
    c.rhs = rhs;
    c.prov = {Provenance::fixed, -1, 0, label};
    lp.constraints.push_back(std::move(c));
  };

  for (int e = 0; e < inst.edge_count(); ++e) {
    std::vector<std::pair<int, Rat>> row, neg;
    for (int l : inst.cover_set(e)) {
      row.emplace_back(l, Rat(1));
      neg.emplace_back(l, Rat(-1));
    }
    if (deficient.count(e)) {
      add_row(row, Rat(1), "cover");
      // coverage <= 4/3 - 1/24, strictly below the deficiency bar
      add_row(neg, Rat(-31, 24), "cap");
    } else {
      add_row(row, Rat(4, 3), "abundant");
    }
  }
  for (int v = 0; v < inst.node_count(); ++v) {
    if (inst.degree(v) != 3) continue;
    std::set<int> links;
    for (int w : inst.neighbors(v)) {
      for (int l : inst.cover_set(inst.edge_between(v, w))) links.insert(l);
    }
    std::vector<std::pair<int, Rat>> row;
    for (int l : links) row.emplace_back(l, Rat(1));
    add_row(row, Rat(2), "node");
  }

  if (!target.p2_edges.empty() && target.kind != TwoPathCase::any) {
    std::vector<int> q = connecting_edges(inst, target.p1_edges, target.p2_edges);
    if (q.empty()) return std::nullopt;
    std::vector<int> longs;
    for (int l = 0; l < inst.link_count(); ++l) {
      bool all = true;
      for (int e : q) all = all && inst.link_covers(l, e);
      if (all) longs.push_back(l);
    }
    std::vector<std::pair<int, Rat>> long_row, long_neg;
    for (int l : longs) {
      long_row.emplace_back(l, Rat(1));
      long_neg.emplace_back(l, Rat(-1));
    }
    // Copy counts are 3k*x, compared against 2k: the case boundary sits at
    // total long weight 2/3.
    if (target.kind == TwoPathCase::few_longs) {
      if (!longs.empty()) add_row(long_neg, Rat(-2, 3), "longs<=2/3");
    } else {
      if (longs.empty()) return std::nullopt;
      add_row(long_row, Rat(3, 4), "longs>2/3");
      // Attachment edge of p1 next to Q: the first p1 edge incident to the
      // first q node.
      int z1 = -1;
      {
        auto [qa, qb] = inst.edge(q.front());
        for (int e : target.p1_edges) {
          auto [a, b] = inst.edge(e);
          if (a == qa || a == qb || b == qa || b == qb) z1 = e;
        }
      }
      if (z1 < 0) return std::nullopt;
      std::vector<std::pair<int, Rat>> sat_row, sat_neg;
      for (int l : longs) {
        if (inst.link_covers(l, z1)) {
          sat_row.emplace_back(l, Rat(1));
          sat_neg.emplace_back(l, Rat(-1));
        }
      }
      if (target.kind == TwoPathCase::saturated) {
        if (sat_row.empty()) return std::nullopt;
        add_row(sat_row, Rat(2, 3), "sat>=2/3");
      } else {
        // many_longs: no attachment edge may reach the 2k copy threshold.
        std::vector<int> attach;
        for (int e : target.p1_edges) attach.push_back(e);
        for (int e : target.p2_edges) attach.push_back(e);
        for (int e : attach) {
          std::vector<std::pair<int, Rat>> row;
          for (int l : longs) {
            if (inst.link_covers(l, e)) row.emplace_back(l, Rat(-1));
          }
          if (!row.empty()) add_row(row, Rat(-7, 12), "long-at<=7/12");
        }
      }
    }
  }

  Rng rng(seed);
  std::vector<Rat> obj(lp.num_vars);
  for (auto& c : obj) c = Rat(rng.uniform(1, 100));
  FractionalSolution x;
  try {
    x = solve_lp(lp, obj);
  } catch (const Error&) {
    return std::nullopt;
  }

  // The LP pins coverage, but re-derive the profile and confirm it matches.
  DeficiencyProfile prof;
  try {
    prof = deficiency_profile(inst, x);
  } catch (const Error&) {
    return std::nullopt;
  }
  std::set<int> got(prof.deficient_edges.begin(), prof.deficient_edges.end());
  if (got != deficient) return std::nullopt;
  size_t want_paths = target.p2_edges.empty() ? 1 : 2;
  if (prof.path_edges.size() != want_paths) return std::nullopt;
  return x;
}

// Random tree path of `len` edges starting from a random edge.
inline std::vector<int> random_tree_path(const TapInstance& inst, Rng& rng, int len) {
  int start = static_cast<int>(rng.uniform(0, inst.edge_count() - 1));
  std::vector<int> path{start};
  std::set<int> nodes{inst.edge(start).first, inst.edge(start).second};
  int tail = inst.edge(start).second;
  while (static_cast<int>(path.size()) < len) {
    std::vector<int> options;
    for (int w : inst.neighbors(tail)) {
      int e = inst.edge_between(tail, w);
      if (!nodes.count(w)) options.push_back(e);
    }
    if (options.empty()) break;
    int e = options[rng.uniform(0, static_cast<long>(options.size()) - 1)];
    auto [a, b] = inst.edge(e);
    tail = nodes.count(a) ? b : a;
    nodes.insert(tail);
    path.push_back(e);
  }
  return path;
}

struct DeficientInstance {
  TapInstance inst;
  FractionalSolution x;
  DeficiencyProfile profile;
};

// Generates `count` instances whose deficient edges form exactly one path.
inline std::vector<DeficientInstance> one_path_corpus(int count, std::uint64_t seed) {
  std::vector<DeficientInstance> out;
  for (int attempt = 0; static_cast<int>(out.size()) < count && attempt < count * 60; ++attempt) {
    Rng rng(derive_seed(seed, attempt));
    int n = 8 + 2 * static_cast<int>(rng.uniform(0, 3));
    TapInstance inst = TapInstance::make(
        gen_random_binary(n, derive_seed(seed, 50000 + attempt), 1, 9, 4 + (attempt % 3)));
    ProfileTarget target;
    target.p1_edges = random_tree_path(inst, rng, 1 + static_cast<int>(rng.uniform(0, 2)));
    auto x = solve_profile_lp(inst, target, derive_seed(seed, 90000 + attempt));
    if (!x) continue;
    out.push_back({inst, *x, deficiency_profile(inst, *x)});
  }
  return out;
}

// Generates two-path instances; `kind` steers the long-link case.
inline std::vector<DeficientInstance> two_path_corpus(int count, std::uint64_t seed,
                                                      TwoPathCase kind,
                                                      int max_p1_len = 2) {
  std::vector<DeficientInstance> out;
  for (int attempt = 0; static_cast<int>(out.size()) < count && attempt < count * 120;
       ++attempt) {
    Rng rng(derive_seed(seed, 7000000 + attempt));
    int n = 10 + 2 * static_cast<int>(rng.uniform(0, 3));
    TapInstance inst = TapInstance::make(
        gen_random_binary(n, derive_seed(seed, 150000 + attempt), 1, 9, 5 + (attempt % 3)));
    ProfileTarget target;
    target.kind = kind;
    target.p1_edges = random_tree_path(inst, rng, 1 + static_cast<int>(rng.uniform(0, max_p1_len - 1)));
    target.p2_edges = random_tree_path(inst, rng, 1 + static_cast<int>(rng.uniform(0, 1)));
    // Node-disjoint with a nonempty gap.
    std::set<int> n1, n2;
    for (int e : target.p1_edges) {
      n1.insert(inst.edge(e).first);
      n1.insert(inst.edge(e).second);
    }
    for (int e : target.p2_edges) {
      n2.insert(inst.edge(e).first);
      n2.insert(inst.edge(e).second);
    }
    bool disjoint = true;
    for (int v : n1) disjoint = disjoint && !n2.count(v);
    if (!disjoint) continue;
    auto x = solve_profile_lp(inst, target, derive_seed(seed, 190000 + attempt));
    if (!x) continue;
    out.push_back({inst, *x, deficiency_profile(inst, *x)});
  }
  return out;
}

}  // namespace test_corpus
