#include "imputeval/partition.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include "imputeval/jsonout.hpp"
#include "imputeval/rng.hpp"

namespace imputeval {

namespace {
constexpr std::size_t kHoldouts = 3;
constexpr std::size_t kFolds = 5;
}  // namespace

SplitPlan make_split_plan(std::size_t n, std::uint64_t seed) {
  // Every fold must be non-empty: the smallest development set has
  // n - ceil(n/3) rows and is divided five ways.
  if (n < kHoldouts || n - (n + kHoldouts - 1) / kHoldouts < kFolds) {
    throw std::invalid_argument("make_split_plan: n too small for 3 holdouts x 5 folds");
  }
  SplitPlan plan;
  plan.seed = seed;
  Rng rng(seed);

  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  rng.shuffle(perm);

  // Thirds; remainder rows go to the leading holdouts in permutation order.
  const std::size_t base = n / kHoldouts;
  const std::size_t rem = n % kHoldouts;
  std::size_t pos = 0;
  for (std::size_t h = 0; h < kHoldouts; ++h) {
    const std::size_t size = base + (h < rem ? 1 : 0);
    IndexSet hold(perm.begin() + pos, perm.begin() + pos + size);
    pos += size;
    std::sort(hold.begin(), hold.end());
    plan.holdouts.push_back(std::move(hold));
  }

  for (std::size_t h = 0; h < kHoldouts; ++h) {
    IndexSet dev;
    dev.reserve(n - plan.holdouts[h].size());
    for (std::size_t i = 0; i < n; ++i) {
      if (!std::binary_search(plan.holdouts[h].begin(), plan.holdouts[h].end(), i)) {
        dev.push_back(i);
      }
    }
    // Round-robin over a freshly shuffled development set.
    IndexSet shuffled = dev;
    rng.shuffle(shuffled);
    std::vector<IndexSet> folds(kFolds);
    for (std::size_t i = 0; i < shuffled.size(); ++i) {
      folds[i % kFolds].push_back(shuffled[i]);
    }
    for (auto& f : folds) std::sort(f.begin(), f.end());
    plan.developments.push_back(std::move(dev));
    plan.folds.push_back(std::move(folds));
  }
  return plan;
}

HalfPartitionSet make_half_partitions(std::size_t n, std::size_t p, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("make_half_partitions: n >= 2 required");
  if (p < 1) throw std::invalid_argument("make_half_partitions: p >= 1 required");
  HalfPartitionSet set;
  set.seed = seed;
  Rng rng(seed);
  const std::size_t half = (n + 1) / 2;
  std::vector<std::size_t> perm(n);
  for (std::size_t k = 0; k < p; ++k) {
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    rng.shuffle(perm);
    IndexSet left(perm.begin(), perm.begin() + half);
    IndexSet right(perm.begin() + half, perm.end());
    std::sort(left.begin(), left.end());
    std::sort(right.begin(), right.end());
    set.pairs.emplace_back(std::move(left), std::move(right));
  }
  return set;
}

namespace {

JVal index_set_json(const IndexSet& s) {
  JVal arr = JVal::array();
  for (std::size_t i : s) arr.push(JVal::integer(static_cast<long long>(i)));
  return arr;
}

}  // namespace

void save_split_plan(const SplitPlan& plan, const std::string& path) {
  JVal root = JVal::object();
  root.set("seed", JVal::integer(static_cast<long long>(plan.seed)));
  JVal holdouts = JVal::array();
  for (const auto& h : plan.holdouts) holdouts.push(index_set_json(h));
  root.set("holdouts", std::move(holdouts));
  JVal devs = JVal::array();
  for (const auto& d : plan.developments) devs.push(index_set_json(d));
  root.set("developments", std::move(devs));
  JVal folds = JVal::array();
  for (const auto& per_dev : plan.folds) {
    JVal inner = JVal::array();
    for (const auto& f : per_dev) inner.push(index_set_json(f));
    folds.push(std::move(inner));
  }
  root.set("folds", std::move(folds));

  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write split plan: " + path);
  root.write(out);
  out << "\n";
}

}  // namespace imputeval
