#include "tap/color.hpp"

#include <algorithm>
#include <json.hpp>

namespace tap {

namespace {

char side_char(ColoringState::Side s) {
  switch (s) {
    case ColoringState::Side::whole: return 'w';
    case ColoringState::Side::left: return 'l';
    case ColoringState::Side::right: return 'r';
  }
  return '?';
}

void require_edge_feasible(const TapInstance& inst, const FractionalSolution& x) {
  for (int e = 0; e < inst.edge_count(); ++e) {
    if (coverage(inst, x, e) < 1) {
      throw Error("solution is not EDGE-LP feasible: edge " + inst.edge_name(e) +
                  " has coverage " + rat_str(coverage(inst, x, e)));
    }
  }
}

long checked_copies(const Rat& r, const char* what) {
  if (denominator(r) != 1) throw Error(std::string(what) + ": non-integer copy count " + rat_str(r));
  return rat_to_long(r);
}

}  // namespace

std::string ConflictWitness::str(const TapInstance& inst) const {
  std::string s = "edge " + inst.edge_name(edge) + " color " + std::to_string(color) + " links";
  for (int l : links) {
    s += " " + inst.node_name(inst.link(l).u) + "-" + inst.node_name(inst.link(l).v);
  }
  return s;
}

ColoringState::ColoringState(const TapInstance& inst, long num_colors)
    : inst_(&inst), num_colors_(num_colors) {
  const int m = inst.link_count();
  pool_.assign(m, 0);
  units_.assign(m, {});
  edge_count_.assign(inst.edge_count(), std::vector<long>(num_colors, 0));
  edge_distinct_.assign(inst.edge_count(), 0);
  left_edges_.assign(m, {});
  right_edges_.assign(m, {});
  for (int l = 0; l < m; ++l) {
    const Link& lk = inst.link(l);
    int a = inst.lca(lk.u, lk.v);
    std::vector<int> u_side, v_side;  // deepest-first
    for (int w = lk.u; w != a; w = inst.parent(w)) u_side.push_back(inst.parent_edge(w));
    for (int w = lk.v; w != a; w = inst.parent(w)) v_side.push_back(inst.parent_edge(w));
    bool u_left = inst.node_name(lk.u) < inst.node_name(lk.v);
    left_edges_[l] = u_left ? u_side : v_side;
    right_edges_[l] = u_left ? v_side : u_side;
  }
}

const std::vector<int>& ColoringState::side_edges(int link, Side side) const {
  switch (side) {
    case Side::left: return left_edges_[link];
    case Side::right: return right_edges_[link];
    case Side::whole: return inst_->link_path(link);
  }
  return inst_->link_path(link);
}

void ColoringState::color_unit(int link, int color, Side side) {
  if (pool_[link] <= 0) throw Error("color_unit: no copies left for link " + std::to_string(link));
  if (color < 1 || color > num_colors_) throw Error("color_unit: color out of range");
  --pool_[link];
  ++units_[link][{color, side_char(side)}];
  for (int e : side_edges(link, side)) {
    if (++edge_count_[e][color - 1] == 1) ++edge_distinct_[e];
  }
}

void ColoringState::uncolor_whole(int link, int color) {
  auto it = units_[link].find({color, 'w'});
  if (it == units_[link].end() || it->second == 0) {
    throw Error("uncolor_whole: no such unit");
  }
  if (--it->second == 0) units_[link].erase(it);
  ++pool_[link];
  for (int e : inst_->link_path(link)) {
    if (--edge_count_[e][color - 1] == 0) --edge_distinct_[e];
  }
}

int ColoringState::first_missing(int e) const {
  if (edge_complete(e)) return 0;
  for (long c = 1; c <= num_colors_; ++c) {
    if (edge_count_[e][c - 1] == 0) return static_cast<int>(c);
  }
  return 0;
}

int ColoringState::first_missing_on_path(const std::vector<int>& path) const {
  // Paths are stored deepest-first and colors are nested top-down, so the
  // incomplete edges form a suffix ending at the highest incomplete edge.
  // A color missing there is missing at every incomplete edge of the path,
  // which is what hands a new color to each of them.
  for (auto it = path.rbegin(); it != path.rend(); ++it) {
    if (!edge_complete(*it)) return first_missing(*it);
  }
  return 0;
}

int ColoringState::first_missing_on_link(int link) const {
  std::vector<char> present(num_colors_ + 1, 0);
  for (const auto& [key, count] : units_[link]) {
    if (count > 0) present[key.first] = 1;
  }
  for (long c = 1; c <= num_colors_; ++c) {
    if (!present[c]) return static_cast<int>(c);
  }
  return 0;
}

bool ColoringState::link_has_color(int link, int color) const {
  for (const auto& [key, count] : units_[link]) {
    if (key.first == color && count > 0) return true;
  }
  return false;
}

long ColoringState::link_colored_units(int link) const {
  long total = 0;
  for (const auto& [key, count] : units_[link]) total += count;
  return total;
}

std::optional<ConflictWitness> ColoringState::find_conflict(const std::vector<int>* edges) const {
  std::vector<int> all;
  if (!edges) {
    all.resize(inst_->edge_count());
    for (int e = 0; e < inst_->edge_count(); ++e) all[e] = e;
    edges = &all;
  }
  for (int e : *edges) {
    if (edge_complete(e)) continue;
    for (long c = 1; c <= num_colors_; ++c) {
      if (edge_count_[e][c - 1] < 3) continue;
      ConflictWitness w;
      w.edge = e;
      w.color = static_cast<int>(c);
      for (int l : inst_->cover_set(e)) {
        long through = 0;
        for (const auto& [key, count] : units_[l]) {
          if (key.first != c || count == 0) continue;
          const auto& se = side_edges(l, key.second == 'w'   ? Side::whole
                                         : key.second == 'l' ? Side::left
                                                             : Side::right);
          if (std::find(se.begin(), se.end(), e) != se.end()) through += count;
        }
        for (long i = 0; i < through; ++i) w.links.push_back(l);
      }
      return w;
    }
  }
  return std::nullopt;
}

std::vector<IntegralSolution> ColoringState::make_classes() const {
  std::vector<IntegralSolution> classes(num_colors_);
  for (int l = 0; l < inst_->link_count(); ++l) {
    for (const auto& [key, count] : units_[l]) {
      if (count > 0) classes[key.first - 1].add(l);
    }
  }
  return classes;
}

Rat min_nonzero_alpha(const FractionalSolution& x) {
  std::optional<Rat> best;
  for (const auto& [l, r] : x.values) {
    if (r == 0) continue;
    if (r < 0) throw Error("min_nonzero_alpha: negative entry");
    if (!best || r < *best) best = r;
  }
  if (!best) throw Error("min_nonzero_alpha: all-zero solution");
  return *best;
}

Decomposition large_link_decompose(const TapInstance& inst, const FractionalSolution& x,
                                   const DecomposeOptions& opts) {
  require_edge_feasible(inst, x);
  const Rat alpha = min_nonzero_alpha(x);
  const Rat beta = Rat(2) / (1 + alpha);

  // k is the least integer making k*beta*x_l an even integer for all links:
  // the lcm of the denominators of x_l/(1+alpha).
  std::vector<Rat> q;
  for (const auto& [l, r] : x.values) {
    if (r != 0) q.push_back(r / (1 + alpha));
  }
  Int k_int = lcm_denominators(q.begin(), q.end());
  Rat k_rat(k_int);
  Int total = 0;
  for (const auto& [l, r] : x.values) total += numerator(Rat(k_rat * beta * r));
  if (total > opts.copy_budget) {
    throw Error("decomposition too large: k = " + k_int.str() + " needs " + total.str() +
                " copies (budget " + std::to_string(opts.copy_budget) + ")");
  }
  const long k = rat_to_long(Rat(k_int));

  ColoringState state(inst, k);
  std::vector<int> order;
  for (const auto& [l, r] : x.values) {
    if (r == 0) continue;
    state.init_pool(l, checked_copies(k_rat * beta * r, "large_link_decompose"));
    order.push_back(l);
  }
  // Highest LCA first; ties by link index.
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    int da = inst.depth(inst.link_lca(a)), db = inst.depth(inst.link_lca(b));
    if (da != db) return da < db;
    return a < b;
  });

  for (int l : order) {
    while (state.pool(l) > 0) {
      std::vector<long> snapshot;
      if (opts.debug_checks) {
        for (int e : inst.link_path(l)) snapshot.push_back(state.edge_distinct(e));
      }
      for (auto side : {ColoringState::Side::left, ColoringState::Side::right}) {
        const auto& path = state.side_edges(l, side);
        int c = state.first_missing_on_path(path);
        if (opts.debug_checks && c != 0) {
          // Top-down monotonicity: the incomplete edges form a suffix of
          // the path and the chosen color is new to every one of them.
          bool seen_incomplete = false;
          for (auto it = path.rbegin(); it != path.rend(); ++it) {
            if (!state.edge_complete(*it)) {
              seen_incomplete = true;
              if (state.edge_color_count(*it, c) != 0) {
                throw Error("top-down monotonicity violated at edge " +
                            inst.edge_name(*it));
              }
            } else if (seen_incomplete) {
              throw Error("complete edge below an incomplete one at link " +
                          std::to_string(l));
            }
          }
        }
        if (c == 0) c = state.first_missing_on_link(l);
        if (c == 0) c = 1;  // link already carries all k colors
        state.color_unit(l, c, ColoringState::Side::whole);
      }
      if (opts.debug_checks) {
        // Each pair of colorings must hand every incomplete covered edge at
        // least one new color.
        size_t i = 0;
        for (int e : inst.link_path(l)) {
          long before = snapshot[i++];
          if (before < k && state.edge_distinct(e) <= before) {
            throw Error("new-color rate violated at edge " + inst.edge_name(e));
          }
        }
      }
    }
  }

  for (int e = 0; e < inst.edge_count(); ++e) {
    if (!state.edge_complete(e)) {
      throw Error("internal: edge " + inst.edge_name(e) + " missing colors after coloring");
    }
  }

  Decomposition d;
  d.k = k;
  d.scale = beta;
  d.classes = state.make_classes();
  d.lambdas.assign(k, Rat(1) / k_rat);
  return d;
}

namespace {

Decomposition half_link_greedy(const TapInstance& inst, const FractionalSolution& x,
                               const DecomposeOptions& opts, const Rat& half_multiplier,
                               const Rat& scale) {
  // k: least positive integer with k*x integral, doubled if needed so the
  // per-side copy counts come out integral.
  std::vector<Rat> vals;
  for (const auto& [l, r] : x.values) vals.push_back(r);
  Int k_int = lcm_denominators(vals.begin(), vals.end());
  {
    bool ok = true;
    for (const auto& [l, r] : x.values) {
      if (denominator(half_multiplier * Rat(k_int) * r) != 1) ok = false;
    }
    if (!ok) k_int *= 2;
  }
  Rat k_rat(k_int);
  const long k = rat_to_long(k_rat);
  const long colors = 2 * k;

  Int total = 0;
  for (const auto& [l, r] : x.values) total += 2 * numerator(Rat(half_multiplier * k_rat * r));
  if (total > opts.copy_budget) {
    throw Error("decomposition too large: k = " + k_int.str() + " needs " + total.str() +
                " copies (budget " + std::to_string(opts.copy_budget) + ")");
  }

  ColoringState state(inst, colors);
  // Track per-side pools on top of the shared link pool.
  std::vector<long> left_pool(inst.link_count(), 0), right_pool(inst.link_count(), 0);
  for (const auto& [l, r] : x.values) {
    long half = checked_copies(half_multiplier * k_rat * r, "half split");
    state.init_pool(l, 2 * half);
    left_pool[l] = half;
    right_pool[l] = half;
  }

  for (;;) {
    // Highest edge missing a color; ties by edge index.
    int e = -1;
    for (int f = 0; f < inst.edge_count(); ++f) {
      if (state.edge_complete(f)) continue;
      if (e < 0 || inst.edge_depth(f) < inst.edge_depth(e)) e = f;
    }
    if (e < 0) break;
    int c = state.first_missing(e);
    int link = -1;
    ColoringState::Side side = ColoringState::Side::left;
    for (int l : inst.cover_set(e)) {
      const auto& le = state.side_edges(l, ColoringState::Side::left);
      if (left_pool[l] > 0 && std::find(le.begin(), le.end(), e) != le.end()) {
        link = l;
        side = ColoringState::Side::left;
        break;
      }
      const auto& re = state.side_edges(l, ColoringState::Side::right);
      if (right_pool[l] > 0 && std::find(re.begin(), re.end(), e) != re.end()) {
        link = l;
        side = ColoringState::Side::right;
        break;
      }
    }
    if (link < 0) {
      throw Error("internal: no uncolored half-link through edge " + inst.edge_name(e));
    }
    if (side == ColoringState::Side::left) {
      --left_pool[link];
    } else {
      --right_pool[link];
    }
    if (opts.debug_checks && state.edge_color_count(e, c) != 0) {
      throw Error("greedy chose a non-missing color (internal)");
    }
    state.color_unit(link, c, side);
  }

  Decomposition d;
  d.k = colors;
  d.scale = scale;
  d.classes = state.make_classes();
  d.lambdas.assign(colors, Rat(1) / Rat(colors));
  return d;
}

}  // namespace

Decomposition greedy_decompose(const TapInstance& inst, const FractionalSolution& x,
                               const DecomposeOptions& opts) {
  require_edge_feasible(inst, x);
  return half_link_greedy(inst, x, opts, Rat(2), Rat(2));
}

Decomposition abundant_scaled_decompose(const TapInstance& inst, const FractionalSolution& x,
                                        const DecomposeOptions& opts) {
  for (int e = 0; e < inst.edge_count(); ++e) {
    Rat cov = coverage(inst, x, e);
    if (cov < Rat(4, 3)) {
      throw Error("deficient edge " + inst.edge_name(e) + " (coverage " + rat_str(cov) +
                  " < 4/3)");
    }
  }
  return half_link_greedy(inst, x, opts, Rat(3, 2), Rat(3, 2));
}

void extend_over_edges(const TapInstance& inst, ColoringState& state,
                       const std::vector<int>& edges_topdown) {
  for (int e : edges_topdown) {
    while (!state.edge_complete(e)) {
      int c = state.first_missing(e);
      int best = -1;
      long best_risk = 3;
      for (int l : inst.cover_set(e)) {
        if (state.pool(l) <= 0) continue;
        long risk = 0;
        for (int f : inst.link_path(l)) {
          if (state.edge_complete(f)) continue;
          risk = std::max(risk, state.edge_color_count(f, c));
        }
        if (risk < best_risk) {
          best_risk = risk;
          best = l;
        }
      }
      if (best < 0 || best_risk >= 2) {
        throw Error("conflict-free extension stuck at edge " + inst.edge_name(e) + " color " +
                    std::to_string(c) +
                    (best < 0 ? " (no copies left)" : " (every choice would conflict)"));
      }
      state.color_unit(best, c, ColoringState::Side::whole);
    }
  }
}

void extend_conflict_free(const TapInstance& inst, ColoringState& partial, int subtree_root) {
  std::vector<int> edges;
  std::vector<int> queue{subtree_root};
  for (size_t i = 0; i < queue.size(); ++i) {
    for (int c : inst.children(queue[i])) {
      edges.push_back(inst.parent_edge(c));
      queue.push_back(c);
    }
  }
  if (auto w = partial.find_conflict(&edges)) {
    throw Error("partial coloring has a conflict: " + w->str(inst));
  }
  extend_over_edges(inst, partial, edges);
}

VerifyResult verify_decomposition(const TapInstance& inst, const FractionalSolution& x,
                                  const Decomposition& d) {
  VerifyResult res;
  auto fail = [&](const std::string& msg) {
    res.ok = false;
    res.diagnostics.push_back(msg);
  };
  if (d.classes.size() != d.lambdas.size() || static_cast<long>(d.classes.size()) != d.k) {
    fail("class/lambda count mismatch with k");
  }
  Rat lambda_sum = 0;
  for (const auto& l : d.lambdas) {
    if (l < 0) fail("negative lambda");
    lambda_sum += l;
  }
  if (lambda_sum != 1) fail("lambdas sum to " + rat_str(lambda_sum) + ", not 1");

  for (size_t i = 0; i < d.classes.size(); ++i) {
    for (int e = 0; e < inst.edge_count(); ++e) {
      bool covered = false;
      for (int l : inst.cover_set(e)) {
        if (d.classes[i].contains(l)) {
          covered = true;
          break;
        }
      }
      if (!covered) {
        fail("class " + std::to_string(i) + " leaves edge " + inst.edge_name(e) + " uncovered");
        break;
      }
    }
  }

  for (int l = 0; l < inst.link_count(); ++l) {
    Rat weight = 0;
    for (size_t i = 0; i < d.classes.size(); ++i) {
      if (d.classes[i].contains(l)) weight += d.lambdas[i];
    }
    if (weight > d.scale * x.value(l)) {
      fail("componentwise bound violated at link " + std::to_string(l) + ": " + rat_str(weight) +
           " > " + rat_str(d.scale * x.value(l)));
    }
  }

  if (res.ok && !d.classes.empty()) {
    Rat best = cost_of(inst, d.classes[0]);
    for (const auto& cl : d.classes) best = std::min(best, cost_of(inst, cl));
    if (best > d.scale * cost_of(inst, x)) {
      fail("cheapest class exceeds scale * cost(x)");
    }
  }
  return res;
}

int best_color_index(const TapInstance& inst, const Decomposition& d) {
  if (d.classes.empty()) throw Error("best_color: empty decomposition");
  int best = 0;
  Rat best_cost = cost_of(inst, d.classes[0]);
  for (int i = 1; i < static_cast<int>(d.classes.size()); ++i) {
    Rat c = cost_of(inst, d.classes[i]);
    if (c < best_cost) {
      best_cost = c;
      best = i;
    }
  }
  return best;
}

IntegralSolution best_color(const TapInstance& inst, const Decomposition& d) {
  return d.classes[best_color_index(inst, d)];
}

std::string decomposition_to_json(const Decomposition& d) {
  nlohmann::json j;
  j["k"] = d.k;
  j["scale"] = rat_str(d.scale);
  j["classes"] = nlohmann::json::array();
  for (const auto& cl : d.classes) j["classes"].push_back(cl.chosen);
  j["lambdas"] = nlohmann::json::array();
  for (const auto& l : d.lambdas) j["lambdas"].push_back(rat_str(l));
  return j.dump(2) + "\n";
}

Decomposition decomposition_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  Decomposition d;
  d.k = j.at("k").get<long>();
  d.scale = parse_rat(j.at("scale").get<std::string>());
  for (const auto& cl : j.at("classes")) {
    IntegralSolution s;
    for (const auto& l : cl) s.add(l.get<int>());
    d.classes.push_back(std::move(s));
  }
  for (const auto& l : j.at("lambdas")) d.lambdas.push_back(parse_rat(l.get<std::string>()));
  return d;
}

}  // namespace tap
