#include "imputeval/missingness.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "imputeval/rng.hpp"

namespace imputeval {

namespace {

// First k entries of a seeded partial Fisher-Yates over [0, n).
std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k, Rng& rng) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (std::size_t i = 0; i < k; ++i) {
    std::swap(idx[i], idx[i + rng.below(n - i)]);
  }
  idx.resize(k);
  return idx;
}

}  // namespace

Mask induce_mcar(const Dataset& ds, const MissingnessSpec& spec) {
  if (spec.rate < 0.0 || spec.rate > 1.0) {
    throw std::invalid_argument("induce_mcar: rate must be in [0, 1]");
  }
  for (double v : ds.values.data) {
    if (is_missing(v)) {
      throw std::invalid_argument(
          "induce_mcar: dataset already contains missing cells (no ground truth)");
    }
  }
  const std::size_t n = ds.n_rows();
  const std::size_t d = ds.n_cols();
  Mask mask(n, d);
  Rng rng(spec.seed);
  if (spec.per_column) {
    const auto k = static_cast<std::size_t>(std::llround(spec.rate * static_cast<double>(n)));
    for (std::size_t j = 0; j < d; ++j) {
      for (std::size_t i : sample_without_replacement(n, k, rng)) {
        mask.set(i, j, true);
      }
    }
  } else {
    const auto k =
        static_cast<std::size_t>(std::llround(spec.rate * static_cast<double>(n * d)));
    for (std::size_t cell : sample_without_replacement(n * d, k, rng)) {
      mask.set(cell / d, cell % d, true);
    }
  }
  return mask;
}

}  // namespace imputeval
