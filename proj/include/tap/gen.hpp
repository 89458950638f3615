#pragma once

#include <cstdint>
#include <random>

#include "tap/instance.hpp"

namespace tap {

// Deterministic RNG wrapper. Distribution helpers are hand-rolled so output
// never depends on the standard library's distribution internals.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}
  std::uint64_t next() { return eng_(); }
  // Uniform in [lo, hi], inclusive.
  long uniform(long lo, long hi) {
    if (hi <= lo) return lo;
    return lo + static_cast<long>(next() % static_cast<std::uint64_t>(hi - lo + 1));
  }

 private:
  std::mt19937_64 eng_;
};

// splitmix64-style mixing for per-task sub-seeds.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t salt);

// Binary tree (all degrees 1 or 3) with leaf-to-leaf links: a covering leaf
// cycle plus `extra_links` random leaf pairs. Node count is rounded down to
// even; integer costs drawn from [cost_lo, cost_hi].
InstanceData gen_random_binary(int nodes, std::uint64_t seed, long cost_lo = 1,
                               long cost_hi = 10, int extra_links = 3);

// Caterpillar: spine of ceil((n+2)/2) nodes with leaves hanging off internal
// spine nodes, plus the chain-and-chord link pattern of the 8-node instance
// used in the counterexample experiments. seed = 0 keeps unit costs.
InstanceData gen_caterpillar(int nodes, std::uint64_t seed = 0, long cost_lo = 1,
                             long cost_hi = 1);

// Star with `leaves` leaves and all leaf-leaf links at unit cost.
InstanceData gen_star(int leaves);

// The 8-node caterpillar with its seven links (four across the top, the
// bottom chord parallel to the first spine edge, and two skew chords).
// Unit costs by default.
InstanceData gen_fig2();

struct SetCoverInstance {
  struct SetEntry {
    std::string name;
    std::vector<int> elements;  // element indices
    Rat cost;
  };
  std::vector<SetEntry> sets;
  int num_elements = 0;
};

SetCoverInstance gen_random_setcover(std::uint64_t seed, int max_sets = 5, int max_elements = 6,
                                     long cost_lo = 1, long cost_hi = 5);

SetCoverInstance setcover_from_json(const std::string& text);
std::string setcover_to_json(const SetCoverInstance& sc);

}  // namespace tap
