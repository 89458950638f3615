#include <CLI11.hpp>
#include <iostream>
#include <json.hpp>

#include "tap/color.hpp"
#include "tap/deficient.hpp"
#include "tap/exact.hpp"
#include "tap/experiment.hpp"
#include "tap/gen.hpp"
#include "tap/io.hpp"
#include "tap/lp.hpp"
#include "tap/reduce.hpp"
#include "tap/threetap.hpp"

namespace {

using namespace tap;

void emit(const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    std::cout << text;
  } else {
    write_file(out_path, text);
  }
}

int cmd_check(const std::string& path) {
  InstanceData data = load_instance_file(path);
  auto violations = validate_instance(data);
  if (violations.empty()) {
    std::cout << "ok: " << data.nodes.size() << " nodes, " << data.tree_edges.size()
              << " tree edges, " << data.links.size() << " links\n";
    return 0;
  }
  for (const auto& v : violations) {
    std::cout << v.kind << ": " << v.detail << "\n";
  }
  return 1;
}

int cmd_reduce(const std::string& path, bool node_gadget, const std::string& out,
               const std::string& map_out) {
  TapInstance inst = TapInstance::make(load_instance_file(path));
  Reduction red = node_gadget ? node_gadget_expand(inst) : binarize(inst);
  emit(out, instance_to_json(red.data));
  if (!map_out.empty()) write_file(map_out, reduction_map_to_json(red.map));
  return 0;
}

int cmd_lp(const std::string& path, const std::string& model, bool solve, bool check_conj,
           std::uint64_t seed, const std::string& out) {
  TapInstance inst = TapInstance::make(load_instance_file(path));
  LinearProgram lp = build_lp(inst, lp_model_from_string(model));
  if (!solve && !check_conj) {
    emit(out, lp_to_json(inst, lp));
    return 0;
  }
  std::optional<std::vector<Rat>> objective;
  if (seed != 0) {
    Rng rng(seed);
    std::vector<Rat> obj(lp.num_vars);
    for (auto& c : obj) c = Rat(rng.uniform(1, 100));
    objective = std::move(obj);
  }
  FractionalSolution x = solve_lp(lp, objective);
  if (check_conj) {
    auto v = check_conjecture(x, lp);
    nlohmann::json j;
    j["status"] = conjecture_status_name(v.status);
    j["is_extreme"] = is_extreme_point(lp, x);
    if (v.min_nonzero) j["min_nonzero"] = rat_str(*v.min_nonzero);
    if (v.max_value) j["max_value"] = rat_str(*v.max_value);
    j["optimum"] = rat_str(lp_value(lp, x));
    j["solution"] = nlohmann::json::parse(solution_to_json(inst, x));
    emit(out, j.dump(2) + "\n");
    return 0;
  }
  emit(out, solution_to_json(inst, x));
  return 0;
}

int cmd_decompose(const std::string& path, const std::string& sol_path,
                  const std::string& algorithm, long copy_budget, bool show_trace,
                  const std::string& out) {
  TapInstance inst = TapInstance::make(load_instance_file(path));
  FractionalSolution x = load_solution_file(inst, sol_path);
  DecomposeOptions opts;
  opts.copy_budget = copy_budget;
  std::vector<std::string> trace;
  Decomposition d;
  if (algorithm == "large-link") {
    d = large_link_decompose(inst, x, opts);
  } else if (algorithm == "greedy") {
    d = greedy_decompose(inst, x, opts);
  } else if (algorithm == "abundant") {
    d = abundant_scaled_decompose(inst, x, opts);
  } else if (algorithm == "deficient") {
    d = deficient_decompose(inst, x, opts, &trace);
  } else {
    throw Error("unknown algorithm '" + algorithm + "'");
  }
  auto verdict = verify_decomposition(inst, x, d);
  if (show_trace) {
    for (const auto& line : trace) std::cerr << "# " << line << "\n";
  }
  emit(out, decomposition_to_json(d));
  if (!verdict.ok) {
    for (const auto& diag : verdict.diagnostics) std::cerr << "verification: " << diag << "\n";
    return 1;
  }
  std::cerr << "verified: factor " << rat_str(d.scale) << ", best class cost "
            << rat_str(cost_of(inst, best_color(inst, d))) << "\n";
  return 0;
}

int cmd_exact(const std::string& path, bool three, int max_links, const std::string& out) {
  OracleOptions opts;
  if (max_links > 0) opts.max_links = max_links;
  nlohmann::json j;
  if (three) {
    ThreeTapInstance tt = threetap_from_json(read_file(path));
    OracleResult res = exact_3tap(tt, opts);
    j["feasible"] = res.feasible();
    j["nodes_explored"] = res.nodes_explored;
    if (res.feasible()) {
      j["optimum"] = rat_str(*res.optimum);
      j["witness"] = nlohmann::json::parse(solution_to_json(tt.graph, res.witness));
    }
  } else {
    TapInstance inst = TapInstance::make(load_instance_file(path));
    OracleResult res = exact_tap(inst, opts);
    j["feasible"] = res.feasible();
    j["nodes_explored"] = res.nodes_explored;
    if (res.feasible()) {
      j["optimum"] = rat_str(*res.optimum);
      j["witness"] = nlohmann::json::parse(solution_to_json(inst, res.witness));
    }
  }
  emit(out, j.dump(2) + "\n");
  return 0;
}

int cmd_3tap(const std::string& path, bool unweighted, const std::string& out) {
  ThreeTapInstance tt = threetap_from_json(read_file(path));
  IntegralSolution sol = unweighted ? unweighted_3tap(tt) : greedy_3tap(tt);
  nlohmann::json j;
  j["cost"] = rat_str(cost_of(tt.graph, sol));
  j["feasible"] = is_feasible_3tap(tt, sol);
  j["links"] = nlohmann::json::parse(solution_to_json(tt.graph, sol)).at("links");
  emit(out, j.dump(2) + "\n");
  return is_feasible_3tap(tt, sol) ? 0 : 1;
}

int cmd_conjecture(int max_nodes, int samples, std::uint64_t seed,
                   const std::string& models_csv, int threads, const std::string& out) {
  std::vector<LpModel> models;
  std::string tok;
  for (char ch : models_csv + ",") {
    if (ch == ',') {
      if (!tok.empty()) models.push_back(lp_model_from_string(tok));
      tok.clear();
    } else {
      tok += ch;
    }
  }
  ScanReport report = conjecture_scan(max_nodes, samples, seed, models, threads);
  nlohmann::json j;
  j["instances"] = report.instances;
  j["solves"] = report.solves;
  j["violations_edge"] = report.violations_edge;
  j["violations_node"] = report.violations_node;
  j["violations_odd"] = report.violations_odd;
  j["violations"] = nlohmann::json::array();
  for (const auto& hit : report.violations) {
    nlohmann::json h;
    h["instance_name"] = hit.instance_name;
    h["model"] = lp_model_name(hit.model);
    h["instance"] = nlohmann::json::parse(instance_to_json(hit.instance));
    h["objective"] = nlohmann::json::array();
    for (const auto& c : hit.objective) h["objective"].push_back(rat_str(c));
    h["extreme_verified"] = hit.extreme_verified;
    h["min_nonzero"] = rat_str(hit.min_nonzero);
    h["max_value"] = rat_str(hit.max_value);
    nlohmann::json xs = nlohmann::json::array();
    for (const auto& [l, r] : hit.x.values) {
      xs.push_back({{"id", l}, {"value", rat_str(r)}});
    }
    h["x"] = std::move(xs);
    j["violations"].push_back(std::move(h));
  }
  emit(out, j.dump(2) + "\n");
  return 0;
}

int cmd_gen(const std::string& kind, int nodes, std::uint64_t seed, long cost_lo, long cost_hi,
            int extra_links, const std::string& sets_path, const std::string& out) {
  if (kind == "random-binary") {
    emit(out, instance_to_json(gen_random_binary(nodes, seed, cost_lo, cost_hi, extra_links)));
  } else if (kind == "caterpillar") {
    emit(out, instance_to_json(gen_caterpillar(nodes, seed, cost_lo, cost_hi)));
  } else if (kind == "star") {
    emit(out, instance_to_json(gen_star(nodes)));
  } else if (kind == "fig2") {
    emit(out, instance_to_json(gen_fig2()));
  } else if (kind == "setcover-gadget") {
    SetCoverInstance sc = sets_path.empty() ? gen_random_setcover(seed)
                                            : setcover_from_json(read_file(sets_path));
    emit(out, threetap_to_json(setcover_gadget(sc)));
  } else {
    throw Error("unknown kind '" + kind + "'");
  }
  return 0;
}

int cmd_experiment(const std::string& config_path, const std::string& out, bool table) {
  ExperimentConfig cfg = experiment_config_from_json(read_file(config_path));
  ExperimentReport report = run_experiment(cfg);
  emit(out, report_to_json(report, cfg.timings));
  if (table) std::cerr << report_to_table(report, cfg.timings);
  return report.all_verified ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Workbench for weighted tree augmentation: LP relaxations, reductions, "
               "convex decompositions, exact oracles and the triangle variant"};
  app.require_subcommand(1);

  std::string path, out, map_out, sol_path, model = "edge", algorithm = "greedy";
  std::string models_csv = "edge,node,odd", kind = "random-binary", sets_path, config_path;
  bool node_gadget = false, solve = false, check_conj = false, three = false, unweighted = false;
  bool show_trace = false, table = false;
  std::uint64_t seed = 0;
  long copy_budget = 1000000, cost_lo = 1, cost_hi = 10;
  int max_links = 0, max_nodes = 10, samples = 50, nodes = 8, extra_links = 3, threads = 0;

  auto* check = app.add_subcommand("check", "validate an instance file");
  check->add_option("instance", path)->required();

  auto* reduce = app.add_subcommand("reduce", "binarize or node-gadget-expand an instance");
  reduce->add_option("instance", path)->required();
  reduce->add_flag("--node-gadget", node_gadget);
  reduce->add_option("-o,--out", out);
  reduce->add_option("--map", map_out);

  auto* lp = app.add_subcommand("lp", "build and solve LP relaxations");
  lp->add_option("instance", path)->required();
  lp->add_option("--model", model)->check(CLI::IsMember({"edge", "node", "odd"}));
  lp->add_flag("--solve", solve);
  lp->add_flag("--check-conjecture", check_conj);
  lp->add_option("--seed", seed);
  lp->add_option("--out", out);

  auto* dec = app.add_subcommand("decompose", "convex-decompose a fractional solution");
  dec->add_option("instance", path)->required();
  dec->add_option("--solution", sol_path)->required();
  dec->add_option("--algorithm", algorithm)
      ->check(CLI::IsMember({"large-link", "greedy", "abundant", "deficient"}));
  dec->add_option("--copy-budget", copy_budget);
  dec->add_flag("--trace", show_trace);
  dec->add_option("--out", out);

  auto* exact = app.add_subcommand("exact", "exact oracle (TAP or 3TAP)");
  exact->add_option("instance", path)->required();
  exact->add_flag("--3tap", three);
  exact->add_option("--max-links", max_links);
  exact->add_option("--out", out);

  auto* three_cmd = app.add_subcommand("3tap", "triangle augmentation algorithms");
  three_cmd->add_option("instance", path)->required();
  three_cmd->add_flag("--unweighted", unweighted);
  three_cmd->add_option("--out", out);

  auto* conj = app.add_subcommand("conjecture", "scan extreme points per model");
  conj->add_option("--max-nodes", max_nodes);
  conj->add_option("--samples", samples);
  conj->add_option("--seed", seed);
  conj->add_option("--models", models_csv);
  conj->add_option("--threads", threads);
  conj->add_option("--out", out);

  auto* gen = app.add_subcommand("gen", "instance generators");
  gen->add_option("--kind", kind)
      ->check(CLI::IsMember({"random-binary", "caterpillar", "star", "setcover-gadget", "fig2"}));
  gen->add_option("--nodes", nodes);
  gen->add_option("--seed", seed);
  gen->add_option("--cost-lo", cost_lo);
  gen->add_option("--cost-hi", cost_hi);
  gen->add_option("--extra-links", extra_links);
  gen->add_option("--sets", sets_path);
  gen->add_option("--out", out);

  auto* exp = app.add_subcommand("experiment", "config-driven experiment sweep");
  exp->add_option("config", config_path)->required();
  exp->add_option("--out", out);
  exp->add_flag("--table", table);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (check->parsed()) return cmd_check(path);
    if (reduce->parsed()) return cmd_reduce(path, node_gadget, out, map_out);
    if (lp->parsed()) return cmd_lp(path, model, solve, check_conj, seed, out);
    if (dec->parsed())
      return cmd_decompose(path, sol_path, algorithm, copy_budget, show_trace, out);
    if (exact->parsed()) return cmd_exact(path, three, max_links, out);
    if (three_cmd->parsed()) return cmd_3tap(path, unweighted, out);
    if (conj->parsed()) return cmd_conjecture(max_nodes, samples, seed, models_csv, threads, out);
    if (gen->parsed())
      return cmd_gen(kind, nodes, seed, cost_lo, cost_hi, extra_links, sets_path, out);
    if (exp->parsed()) return cmd_experiment(config_path, out, table);
  } catch (const tap::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
