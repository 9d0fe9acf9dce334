#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace imputeval {

using IndexSet = std::vector<std::size_t>;  // kept sorted ascending

// Hierarchical split: three holdout thirds, each with a complementary
// development set divided into five validation folds.
struct SplitPlan {
  std::vector<IndexSet> holdouts;      // 3 disjoint sets covering [0, n)
  std::vector<IndexSet> developments;  // complements of the holdouts
  std::vector<std::vector<IndexSet>> folds;  // [holdout][fold] over the development set
  std::uint64_t seed = 0;
};

// P random half-partitions (I_p, J_p) of [0, n); |I_p| = ceil(n/2).
struct HalfPartitionSet {
  std::vector<std::pair<IndexSet, IndexSet>> pairs;
  std::uint64_t seed = 0;
};

SplitPlan make_split_plan(std::size_t n, std::uint64_t seed);
HalfPartitionSet make_half_partitions(std::size_t n, std::size_t p, std::uint64_t seed);

void save_split_plan(const SplitPlan& plan, const std::string& path);

}  // namespace imputeval
