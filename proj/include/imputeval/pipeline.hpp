#pragma once

#include <functional>

#include "imputeval/report.hpp"

namespace imputeval {

// Worker cap: explicit argument, else IMPUTEVAL_WORKERS, else hardware.
std::size_t effective_workers(std::size_t requested = 0);

// Runs fn(0..n-1) on a small worker pool. Tasks must be independent; results
// must be written to pre-addressed slots so the schedule cannot leak into
// the output.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn,
                  std::size_t workers = 0);

// Executes the full benchmark grid (holdout x rates x imputer x repeat x
// fold) and returns the report with correlation tables filled in. Per-cell
// failures are recorded in the report, not thrown.
QualityReport run_benchmark(const RunConfig& cfg);

// Row subset of a dataset (labels included when present).
Dataset subset_rows(const Dataset& ds, const std::vector<std::size_t>& rows);

}  // namespace imputeval
