#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "imputeval/matrix.hpp"
#include "imputeval/partition.hpp"

namespace imputeval {

// M unit directions in R^d, uniform on the sphere.
struct DirectionSet {
  Matrix vectors;  // m x d, each row unit norm
  std::uint64_t seed = 0;

  std::size_t count() const { return vectors.rows; }
  std::size_t dim() const { return vectors.cols; }
};

DirectionSet sample_unit_directions(std::size_t d, std::size_t m, std::uint64_t seed);

// Baseline and imputed sliced distances over the (direction, partition) grid.
// w(r,p)  : distance of the original J_p projections from the original I_p.
// w_hat   : same with the J_p rows taken from the imputed data.
// Both are normalized by the population sd of the original I_p projections;
// pairs whose sd falls below the guard are skipped and recorded.
struct SlicedResult {
  Matrix w;      // m x p, NaN where skipped
  Matrix w_hat;  // m x p, NaN where skipped
  struct Skip {
    std::size_t r;
    std::size_t p;
    std::string reason;
  };
  std::vector<Skip> skipped;
  std::uint64_t direction_seed = 0;
  std::uint64_t partition_seed = 0;
};

SlicedResult sliced_distances(const Matrix& original, const Matrix& imputed,
                              const DirectionSet& dirs, const HalfPartitionSet& halves);

// Class C: the two distance grids treated as 1-D samples, compared with the
// same KL/KS/W2 kernels, plus the per-pair distance ratios w_hat/w.
struct ClassCStats {
  double kl = 0.0;
  double ks = 0.0;
  double w2 = 0.0;
  std::vector<double> ratios;  // over non-skipped pairs with w >= guard
  double ratio_median = 1.0;
  double ratio_iqr = 0.0;
  std::size_t guarded = 0;  // pairs dropped from the ratio list (w below guard)
  std::size_t skipped = 0;
};

ClassCStats class_c_stats(const SlicedResult& res, std::size_t bins = 50, double eps = 1e-10);

// Fraction of (feature, repeat) Wasserstein distances above each threshold.
std::map<double, double> outlier_proportions(
    const std::map<std::pair<std::size_t, std::size_t>, double>& per_feature_w2,
    const std::vector<double>& thresholds);

}  // namespace imputeval
