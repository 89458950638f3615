#include "tap/experiment.hpp"

#include <omp.h>

#include <algorithm>
#include <chrono>
#include <json.hpp>
#include <map>
#include <sstream>

#include "tap/color.hpp"
#include "tap/deficient.hpp"
#include "tap/exact.hpp"
#include "tap/gen.hpp"
#include "tap/io.hpp"
#include "tap/lp.hpp"

namespace tap {

ExperimentConfig experiment_config_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  ExperimentConfig cfg;
  if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("models")) {
    for (const auto& m : j.at("models")) cfg.models.push_back(m.get<std::string>());
  }
  if (j.contains("algorithms")) {
    for (const auto& a : j.at("algorithms")) cfg.algorithms.push_back(a.get<std::string>());
  }
  if (j.contains("oracle_max_links")) cfg.oracle_max_links = j.at("oracle_max_links").get<int>();
  if (j.contains("copy_budget")) cfg.copy_budget = j.at("copy_budget").get<long>();
  if (j.contains("threads")) cfg.threads = j.at("threads").get<int>();
  if (j.contains("timings")) cfg.timings = j.at("timings").get<bool>();
  if (j.contains("sources")) {
    for (const auto& s : j.at("sources")) {
      ExperimentConfig::Source src;
      src.kind = s.at("kind").get<std::string>();
      if (s.contains("id")) src.id = s.at("id").get<std::string>();
      if (s.contains("path")) src.path = s.at("path").get<std::string>();
      if (s.contains("nodes")) src.nodes = s.at("nodes").get<int>();
      if (s.contains("count")) src.count = s.at("count").get<int>();
      if (s.contains("cost_lo")) src.cost_lo = s.at("cost_lo").get<long>();
      if (s.contains("cost_hi")) src.cost_hi = s.at("cost_hi").get<long>();
      if (s.contains("extra_links")) src.extra_links = s.at("extra_links").get<int>();
      cfg.sources.push_back(std::move(src));
    }
  }
  return cfg;
}

namespace {

struct Job {
  std::string id;
  InstanceData data;
};

std::vector<Job> expand_sources(const ExperimentConfig& cfg) {
  std::vector<Job> jobs;
  int src_index = 0;
  for (const auto& s : cfg.sources) {
    std::string base = s.id.empty() ? s.kind + "-" + std::to_string(src_index) : s.id;
    if (s.kind == "file") {
      jobs.push_back({base, load_instance_file(s.path)});
    } else if (s.kind == "fig2") {
      jobs.push_back({base, gen_fig2()});
    } else if (s.kind == "star") {
      jobs.push_back({base, gen_star(s.nodes)});
    } else {
      for (int i = 0; i < s.count; ++i) {
        std::uint64_t sub = derive_seed(cfg.seed, 100000 + src_index * 1000 + i);
        InstanceData d = s.kind == "caterpillar"
                             ? gen_caterpillar(s.nodes, sub, s.cost_lo, s.cost_hi)
                             : gen_random_binary(s.nodes, sub, s.cost_lo, s.cost_hi,
                                                 s.extra_links);
        jobs.push_back({base + "-" + std::to_string(i), std::move(d)});
      }
    }
    ++src_index;
  }
  std::sort(jobs.begin(), jobs.end(), [](const Job& a, const Job& b) { return a.id < b.id; });
  return jobs;
}

Decomposition run_algorithm(const std::string& alg, const TapInstance& inst,
                            const FractionalSolution& x, const DecomposeOptions& opts) {
  if (alg == "large-link") return large_link_decompose(inst, x, opts);
  if (alg == "greedy") return greedy_decompose(inst, x, opts);
  if (alg == "abundant") return abundant_scaled_decompose(inst, x, opts);
  if (alg == "deficient") return deficient_decompose(inst, x, opts);
  throw Error("unknown algorithm '" + alg + "'");
}

}  // namespace

ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  ExperimentReport report;
  std::vector<Job> jobs = expand_sources(cfg);
  std::vector<std::vector<ExperimentRow>> rows(jobs.size());

  if (cfg.threads > 0) omp_set_num_threads(cfg.threads);
#pragma omp parallel for schedule(dynamic)
  for (int ji = 0; ji < static_cast<int>(jobs.size()); ++ji) {
    const Job& job = jobs[ji];
    auto start = std::chrono::steady_clock::now();
    auto elapsed_ms = [&]() {
      return std::chrono::duration_cast<std::chrono::milliseconds>(
                 std::chrono::steady_clock::now() - start)
          .count();
    };
    TapInstance inst = TapInstance::make(job.data);
    std::optional<Rat> exact;
    if (inst.link_count() <= cfg.oracle_max_links) {
      OracleOptions oo;
      oo.max_links = cfg.oracle_max_links;
      auto res = exact_tap(inst, oo);
      if (res.feasible()) exact = *res.optimum;
    }
    for (const std::string& model : cfg.models) {
      ExperimentRow base;
      base.instance_id = job.id;
      base.model = model;
      FractionalSolution x;
      try {
        LinearProgram lp = build_lp(inst, lp_model_from_string(model));
        x = solve_lp(lp);
        base.lp_optimum = rat_str(lp_value(lp, x));
      } catch (const Error& e) {
        base.note = e.what();
        base.verified = false;
        rows[ji].push_back(base);
        continue;
      }
      for (const std::string& alg : cfg.algorithms) {
        ExperimentRow row = base;
        row.algorithm = alg;
        try {
          DecomposeOptions opts;
          opts.copy_budget = cfg.copy_budget;
          Decomposition d = run_algorithm(alg, inst, x, opts);
          auto verdict = verify_decomposition(inst, x, d);
          row.verified = verdict.ok;
          if (!verdict.ok && !verdict.diagnostics.empty()) row.note = verdict.diagnostics[0];
          row.certified_factor = rat_str(d.scale);
          Rat best = cost_of(inst, best_color(inst, d));
          row.best_class_cost = rat_str(best);
          if (exact) {
            row.exact_optimum = rat_str(*exact);
            if (*exact != 0) row.observed_ratio = rat_str(best / *exact);
          }
        } catch (const Error& e) {
          row.verified = false;
          row.note = e.what();
        }
        row.runtime_ms = cfg.timings ? elapsed_ms() : -1;
        rows[ji].push_back(row);
      }
      if (cfg.algorithms.empty()) {
        base.runtime_ms = cfg.timings ? elapsed_ms() : -1;
        base.verified = true;
        rows[ji].push_back(base);
      }
    }
  }

  std::map<std::string, Rat> max_ratio;
  for (auto& rv : rows) {
    for (auto& r : rv) {
      if (!r.verified) report.all_verified = false;
      if (!r.observed_ratio.empty()) {
        Rat ratio = parse_rat(r.observed_ratio);
        auto it = max_ratio.find(r.algorithm);
        if (it == max_ratio.end() || ratio > it->second) max_ratio[r.algorithm] = ratio;
      }
      report.rows.push_back(std::move(r));
    }
  }
  std::ostringstream agg;
  for (const auto& [alg, ratio] : max_ratio) {
    agg << alg << "=" << rat_str(ratio) << " ";
  }
  report.max_ratio_per_algorithm = agg.str();
  return report;
}

std::string report_to_json(const ExperimentReport& r, bool timings) {
  nlohmann::json j;
  j["rows"] = nlohmann::json::array();
  for (const auto& row : r.rows) {
    nlohmann::json jr{{"instance", row.instance_id},
                      {"model", row.model},
                      {"lp_optimum", row.lp_optimum},
                      {"algorithm", row.algorithm},
                      {"certified_factor", row.certified_factor},
                      {"best_class_cost", row.best_class_cost},
                      {"exact_optimum", row.exact_optimum},
                      {"observed_ratio", row.observed_ratio},
                      {"verified", row.verified},
                      {"note", row.note}};
    if (timings) jr["runtime_ms"] = row.runtime_ms;
    j["rows"].push_back(std::move(jr));
  }
  j["max_ratio_per_algorithm"] = r.max_ratio_per_algorithm;
  j["all_verified"] = r.all_verified;
  return j.dump(2) + "\n";
}

std::string report_to_table(const ExperimentReport& r, bool timings) {
  std::vector<std::vector<std::string>> cells;
  std::vector<std::string> header{"instance", "model",      "lp_opt", "algorithm",
                                  "factor",   "best_class", "exact",  "ratio",
                                  "verified"};
  if (timings) header.push_back("ms");
  cells.push_back(header);
  for (const auto& row : r.rows) {
    std::vector<std::string> c{row.instance_id,
                               row.model,
                               row.lp_optimum,
                               row.algorithm,
                               row.certified_factor,
                               row.best_class_cost,
                               row.exact_optimum,
                               row.observed_ratio,
                               row.verified ? "yes" : "NO"};
    if (timings) c.push_back(std::to_string(row.runtime_ms));
    cells.push_back(std::move(c));
  }
  std::vector<size_t> width(cells[0].size(), 0);
  for (const auto& rowc : cells) {
    for (size_t i = 0; i < rowc.size(); ++i) width[i] = std::max(width[i], rowc[i].size());
  }
  std::ostringstream out;
  for (const auto& rowc : cells) {
    for (size_t i = 0; i < rowc.size(); ++i) {
      out << rowc[i] << std::string(width[i] - rowc[i].size() + 2, ' ');
    }
    out << "\n";
  }
  if (!r.max_ratio_per_algorithm.empty()) {
    out << "max observed ratio: " << r.max_ratio_per_algorithm << "\n";
  }
  return out.str();
}

}  // namespace tap
