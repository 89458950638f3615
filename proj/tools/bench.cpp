// Compares the serial and OpenMP-parallel conjecture scans on the same
// workload and checks they produce identical reports.
#include <omp.h>

#include <chrono>
#include <cstdio>
#include <string>

#include "tap/lp.hpp"

using namespace tap;

namespace {

struct Timing {
  double seconds = 0;
  ScanReport report;
};

Timing run(int threads, int max_nodes, int samples, std::uint64_t seed) {
  auto start = std::chrono::steady_clock::now();
  Timing t;
  t.report = conjecture_scan(max_nodes, samples, seed,
                             {LpModel::edge, LpModel::node, LpModel::odd}, threads);
  t.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return t;
}

std::string report_key(const ScanReport& r) {
  std::string key = std::to_string(r.instances) + "/" + std::to_string(r.solves);
  for (const auto& hit : r.violations) {
    key += "|" + hit.instance_name + ":" + lp_model_name(hit.model);
    for (const auto& [l, v] : hit.x.values) key += "," + std::to_string(l) + "=" + rat_str(v);
  }
  return key;
}

}  // namespace

int main(int argc, char** argv) {
  int max_nodes = argc > 1 ? std::atoi(argv[1]) : 8;
  int samples = argc > 2 ? std::atoi(argv[2]) : 40;
  std::uint64_t seed = argc > 3 ? std::strtoull(argv[3], nullptr, 10) : 7;

  std::printf("conjecture scan benchmark: max_nodes=%d samples=%d seed=%llu\n", max_nodes,
              samples, static_cast<unsigned long long>(seed));
  Timing serial = run(1, max_nodes, samples, seed);
  int hw = omp_get_max_threads();
  Timing parallel = run(hw, max_nodes, samples, seed);

  std::printf("%-10s %8s %10s %8s\n", "mode", "threads", "seconds", "solves");
  std::printf("%-10s %8d %10.3f %8ld\n", "serial", 1, serial.seconds, serial.report.solves);
  std::printf("%-10s %8d %10.3f %8ld\n", "openmp", hw, parallel.seconds,
              parallel.report.solves);
  if (serial.seconds > 0) {
    std::printf("speedup: %.2fx\n", serial.seconds / parallel.seconds);
  }
  bool same = report_key(serial.report) == report_key(parallel.report);
  std::printf("reports identical: %s\n", same ? "yes" : "NO");
  return same ? 0 : 1;
}
