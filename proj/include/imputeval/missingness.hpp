#pragma once

#include <cstdint>

#include "imputeval/dataset.hpp"

namespace imputeval {

struct MissingnessSpec {
  double rate = 0.0;  // in [0, 1]
  std::uint64_t seed = 0;
  bool per_column = false;  // stratify the exact count per column
};

// MCAR with exact-count semantics: selects round(rate * N * d) cells
// uniformly without replacement over the whole matrix (or round(rate * N)
// per column when stratified). The dataset must be complete so the removed
// cells have a ground truth.
Mask induce_mcar(const Dataset& ds, const MissingnessSpec& spec);

}  // namespace imputeval
