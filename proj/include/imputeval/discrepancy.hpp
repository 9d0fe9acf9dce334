#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "imputeval/dataset.hpp"
#include "imputeval/matrix.hpp"

namespace imputeval {

// Exact 2-Wasserstein distance between two one-dimensional empirical
// distributions with uniform weights, by quantile matching on the merged
// quantile grid. Returns the unsquared distance.
double wasserstein2_1d(std::span<const double> a, std::span<const double> b);

// Two-sample Kolmogorov-Smirnov statistic: sup |ECDF_a - ECDF_b|, with ties
// pooled (both ECDFs advanced past equal values before comparing).
double ks_statistic(std::span<const double> a, std::span<const double> b);

// Histogram KL divergence KL(a || b): equal-width bins over the pooled range,
// probabilities smoothed by adding eps to every bin and renormalizing.
// A degenerate pooled range (all values equal) gives 0 by convention.
double kl_divergence(std::span<const double> a, std::span<const double> b,
                     std::size_t bins = 50, double eps = 1e-10);

// Class A: sample-wise discrepancy over masked cells of normalized data.
// r2 is NaN when the true masked values have zero variance.
struct SampleStats {
  double rmse = 0.0;
  double mae = 0.0;
  double r2 = 1.0;
};

SampleStats sample_stats(const Matrix& truth, const Matrix& imputed, const Mask& mask);

// Class B: per-feature distributional discrepancy between the true and
// imputed values at masked cells, plus min/median/max summaries.
struct FeatureDistances {
  double kl = 0.0;
  double ks = 0.0;
  double w2 = 0.0;
};

struct FeatureStats {
  std::vector<std::pair<std::size_t, FeatureDistances>> per_feature;  // (column, distances)
  FeatureDistances min;
  FeatureDistances median;  // lower middle on even counts
  FeatureDistances max;
};

FeatureStats feature_stats(const Matrix& truth, const Matrix& imputed, const Mask& mask,
                           std::size_t bins = 50, double eps = 1e-10);

// Lower-middle median of an unsorted sample (the summary convention used
// throughout the reports).
double lower_median(std::vector<double> v);

}  // namespace imputeval
