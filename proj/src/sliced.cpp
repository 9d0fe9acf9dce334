#include "imputeval/sliced.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "imputeval/discrepancy.hpp"
#include "imputeval/rng.hpp"

namespace imputeval {

namespace {
constexpr double kSdGuard = 1e-12;
constexpr double kRatioGuard = 1e-12;
}  // namespace

DirectionSet sample_unit_directions(std::size_t d, std::size_t m, std::uint64_t seed) {
  if (d < 1) throw std::invalid_argument("sample_unit_directions: d >= 1 required");
  if (m < d) throw std::invalid_argument("sample_unit_directions: m >= d required");
  DirectionSet set;
  set.seed = seed;
  set.vectors = Matrix(m, d);
  Rng rng(seed);
  for (std::size_t r = 0; r < m; ++r) {
    double norm2 = 0.0;
    do {
      norm2 = 0.0;
      for (std::size_t j = 0; j < d; ++j) {
        const double g = rng.normal();
        set.vectors.at(r, j) = g;
        norm2 += g * g;
      }
    } while (norm2 < 1e-300);
    const double inv = 1.0 / std::sqrt(norm2);
    for (std::size_t j = 0; j < d; ++j) set.vectors.at(r, j) *= inv;
  }
  return set;
}

SlicedResult sliced_distances(const Matrix& original, const Matrix& imputed,
                              const DirectionSet& dirs, const HalfPartitionSet& halves) {
  if (!original.same_shape(imputed)) throw std::invalid_argument("sliced_distances: shape mismatch");
  if (dirs.dim() != original.cols) {
    throw std::invalid_argument("sliced_distances: direction dimension mismatch");
  }
  const std::size_t n = original.rows;
  const std::size_t m = dirs.count();
  const std::size_t np = halves.pairs.size();

  SlicedResult res;
  res.w = Matrix(m, np, missing_value());
  res.w_hat = Matrix(m, np, missing_value());
  res.direction_seed = dirs.seed;
  res.partition_seed = halves.seed;

  std::vector<double> proj_orig(n);
  std::vector<double> proj_imp(n);
  std::vector<double> left;
  std::vector<double> right_orig;
  std::vector<double> right_imp;
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t i = 0; i < n; ++i) {
      double po = 0.0;
      double pi = 0.0;
      for (std::size_t j = 0; j < original.cols; ++j) {
        po += original.at(i, j) * dirs.vectors.at(r, j);
        pi += imputed.at(i, j) * dirs.vectors.at(r, j);
      }
      proj_orig[i] = po;
      proj_imp[i] = pi;
    }
    for (std::size_t p = 0; p < np; ++p) {
      const auto& [ip, jp] = halves.pairs[p];
      double mean = 0.0;
      for (std::size_t i : ip) mean += proj_orig[i];
      mean /= static_cast<double>(ip.size());
      double ss = 0.0;
      for (std::size_t i : ip) {
        const double c = proj_orig[i] - mean;
        ss += c * c;
      }
      const double s = std::sqrt(ss / static_cast<double>(ip.size()));
      if (s < kSdGuard) {
        res.skipped.push_back({r, p, "constant_projection"});
        continue;
      }
      left.clear();
      right_orig.clear();
      right_imp.clear();
      for (std::size_t i : ip) left.push_back(proj_orig[i] / s);
      for (std::size_t j : jp) {
        right_orig.push_back(proj_orig[j] / s);
        right_imp.push_back(proj_imp[j] / s);
      }
      res.w.at(r, p) = wasserstein2_1d(left, right_orig);
      res.w_hat.at(r, p) = wasserstein2_1d(left, right_imp);
    }
  }
  return res;
}

namespace {

// Linear-interpolation quantile of a sorted sample.
double quantile_sorted(const std::vector<double>& sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(pos);
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

}  // namespace

ClassCStats class_c_stats(const SlicedResult& res, std::size_t bins, double eps) {
  std::vector<double> w;
  std::vector<double> what;
  for (std::size_t r = 0; r < res.w.rows; ++r) {
    for (std::size_t p = 0; p < res.w.cols; ++p) {
      if (is_missing(res.w.at(r, p))) continue;
      w.push_back(res.w.at(r, p));
      what.push_back(res.w_hat.at(r, p));
    }
  }
  if (w.size() < 2) throw std::invalid_argument("class_c_stats: fewer than 2 usable pairs");

  ClassCStats out;
  out.skipped = res.skipped.size();
  out.kl = kl_divergence(w, what, bins, eps);
  out.ks = ks_statistic(w, what);
  out.w2 = wasserstein2_1d(w, what);
  for (std::size_t k = 0; k < w.size(); ++k) {
    if (w[k] >= kRatioGuard) {
      out.ratios.push_back(what[k] / w[k]);
    } else {
      ++out.guarded;
    }
  }
  if (!out.ratios.empty()) {
    out.ratio_median = lower_median(out.ratios);
    std::vector<double> sorted = out.ratios;
    std::sort(sorted.begin(), sorted.end());
    out.ratio_iqr = quantile_sorted(sorted, 0.75) - quantile_sorted(sorted, 0.25);
  } else {
    out.ratio_median = missing_value();
    out.ratio_iqr = missing_value();
  }
  return out;
}

std::map<double, double> outlier_proportions(
    const std::map<std::pair<std::size_t, std::size_t>, double>& per_feature_w2,
    const std::vector<double>& thresholds) {
  if (per_feature_w2.empty()) throw std::invalid_argument("outlier_proportions: empty map");
  std::map<double, double> out;
  for (double t : thresholds) {
    std::size_t above = 0;
    for (const auto& [key, dist] : per_feature_w2) {
      if (dist > t) ++above;
    }
    out[t] = static_cast<double>(above) / static_cast<double>(per_feature_w2.size());
  }
  return out;
}

}  // namespace imputeval
