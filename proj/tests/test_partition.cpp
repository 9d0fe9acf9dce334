#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "imputeval/partition.hpp"

using namespace imputeval;

namespace {

void check_plan_invariants(const SplitPlan& plan, std::size_t n) {
  REQUIRE(plan.holdouts.size() == 3);
  REQUIRE(plan.developments.size() == 3);
  REQUIRE(plan.folds.size() == 3);

  // Holdouts partition [0, n) with sizes differing by at most one.
  std::set<std::size_t> all;
  std::size_t min_size = n;
  std::size_t max_size = 0;
  for (const auto& h : plan.holdouts) {
    for (std::size_t i : h) {
      CHECK(i < n);
      CHECK(all.insert(i).second);  // disjoint
    }
    min_size = std::min(min_size, h.size());
    max_size = std::max(max_size, h.size());
  }
  CHECK(all.size() == n);
  CHECK(max_size - min_size <= 1);

  for (std::size_t h = 0; h < 3; ++h) {
    // Development is the exact complement.
    std::set<std::size_t> dev(plan.developments[h].begin(), plan.developments[h].end());
    CHECK(dev.size() == n - plan.holdouts[h].size());
    for (std::size_t i : plan.holdouts[h]) CHECK(dev.count(i) == 0);

    // Folds partition the development set, balanced within one.
    REQUIRE(plan.folds[h].size() == 5);
    std::set<std::size_t> covered;
    std::size_t fmin = n;
    std::size_t fmax = 0;
    for (const auto& f : plan.folds[h]) {
      CHECK(!f.empty());
      for (std::size_t i : f) {
        CHECK(dev.count(i) == 1);
        CHECK(covered.insert(i).second);
      }
      fmin = std::min(fmin, f.size());
      fmax = std::max(fmax, f.size());
    }
    CHECK(covered.size() == dev.size());
    CHECK(fmax - fmin <= 1);
  }
}

}  // namespace

TEST_CASE("n=9 gives holdout thirds of 3 and developments of 6") {
  const SplitPlan plan = make_split_plan(9, 1);
  for (const auto& h : plan.holdouts) CHECK(h.size() == 3);
  for (const auto& d : plan.developments) CHECK(d.size() == 6);
  check_plan_invariants(plan, 9);
}

TEST_CASE("n=15 gives folds of size 2 over developments of 10") {
  const SplitPlan plan = make_split_plan(15, 2);
  for (const auto& d : plan.developments) CHECK(d.size() == 10);
  for (const auto& per_dev : plan.folds) {
    for (const auto& f : per_dev) CHECK(f.size() == 2);
  }
  check_plan_invariants(plan, 15);
}

TEST_CASE("same seed reproduces the identical plan") {
  const SplitPlan a = make_split_plan(100, 42);
  const SplitPlan b = make_split_plan(100, 42);
  CHECK(a.holdouts == b.holdouts);
  CHECK(a.developments == b.developments);
  CHECK(a.folds == b.folds);
  const SplitPlan c = make_split_plan(100, 43);
  CHECK(a.holdouts != c.holdouts);
}

TEST_CASE("plan invariants hold over a sweep of sizes and seeds") {
  for (const std::size_t n : {8u, 9u, 10u, 11u, 16u, 23u, 50u, 101u}) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      check_plan_invariants(make_split_plan(n, seed), n);
    }
  }
}

TEST_CASE("too-small n is rejected") {
  CHECK_THROWS_AS(make_split_plan(7, 1), std::invalid_argument);
  CHECK_THROWS_AS(make_split_plan(2, 1), std::invalid_argument);
  CHECK_NOTHROW(make_split_plan(8, 1));
}

TEST_CASE("half partitions: n=7 gives sizes 4 and 3") {
  const HalfPartitionSet set = make_half_partitions(7, 10, 3);
  REQUIRE(set.pairs.size() == 10);
  for (const auto& [left, right] : set.pairs) {
    CHECK(left.size() == 4);
    CHECK(right.size() == 3);
    std::set<std::size_t> all(left.begin(), left.end());
    for (std::size_t i : right) CHECK(all.insert(i).second);
    CHECK(all.size() == 7);
  }
}

TEST_CASE("half partitions: n=2 splits into singletons") {
  const HalfPartitionSet set = make_half_partitions(2, 1, 9);
  REQUIRE(set.pairs.size() == 1);
  CHECK(set.pairs[0].first.size() == 1);
  CHECK(set.pairs[0].second.size() == 1);
  CHECK(set.pairs[0].first[0] != set.pairs[0].second[0]);
}

TEST_CASE("ten partitions of 100 indices are pairwise distinct") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const HalfPartitionSet set = make_half_partitions(100, 10, seed);
    for (std::size_t a = 0; a < set.pairs.size(); ++a) {
      for (std::size_t b = a + 1; b < set.pairs.size(); ++b) {
        CHECK(set.pairs[a].first != set.pairs[b].first);
      }
    }
  }
}

TEST_CASE("half partitions are deterministic per seed") {
  const HalfPartitionSet a = make_half_partitions(31, 10, 5);
  const HalfPartitionSet b = make_half_partitions(31, 10, 5);
  CHECK(a.pairs == b.pairs);
}

TEST_CASE("invalid half-partition arguments throw") {
  CHECK_THROWS_AS(make_half_partitions(1, 10, 0), std::invalid_argument);
  CHECK_THROWS_AS(make_half_partitions(10, 0, 0), std::invalid_argument);
}
