#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "imputeval/dataset.hpp"

namespace imputeval {

enum class ImputeMethod { Mean, Mice, External, Identity };

std::string to_string(ImputeMethod m);
ImputeMethod impute_method_from_string(const std::string& s);

struct MiceParams {
  std::size_t iterations = 10;
  std::size_t donors = 5;   // pmm donor pool size k
  double ridge = 1e-6;      // regression regularization lambda
};

struct ImputerConfig {
  ImputeMethod method = ImputeMethod::Mean;
  MiceParams mice;
  std::size_t repeats = 1;
  std::uint64_t seed = 0;
};

// One completed dataset per repeat, with per-repeat provenance.
struct ImputationSet {
  std::vector<Dataset> completions;
  struct Provenance {
    std::string method;
    std::uint64_t seed = 0;
  };
  std::vector<Provenance> provenance;
};

// Column means over the observed training cells fill the target's missing
// cells. Deterministic; every column needs at least one observed train cell.
Dataset impute_mean(const Dataset& train, const Mask& train_mask, const Dataset& target,
                    const Mask& target_mask);

// Chained equations with predictive mean matching. Missing cells start as a
// random observed training value of the same column; each sweep regresses
// every incomplete column on all others (ridge least squares over training
// rows observed in that column) and replaces each missing cell with the
// observed value of a donor drawn uniformly among the k training rows whose
// predictions are nearest. Columns are visited in schema order.
Dataset impute_mice(const Dataset& train, const Mask& train_mask, const Dataset& target,
                    const Mask& target_mask, const MiceParams& params, std::uint64_t seed);

// Runs the configured imputer `repeats` times with seeds derived from
// (cfg.seed, repeat index). Mean imputation yields identical completions.
ImputationSet impute_multiple(const Dataset& train, const Mask& train_mask, const Dataset& target,
                              const Mask& target_mask, const ImputerConfig& cfg);

// Loads externally produced completions (one CSV per repeat, encoded header).
// Observed cells must match the reference within 1e-9 and nothing may remain
// missing; violations mean the external tool disturbed known values.
ImputationSet load_external_imputation(const std::vector<std::string>& paths,
                                       const Dataset& reference, const Mask& mask);

void save_imputation_set(const ImputationSet& set, const std::string& prefix);

}  // namespace imputeval
