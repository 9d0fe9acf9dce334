#include "imputeval/discrepancy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace imputeval {

double wasserstein2_1d(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("wasserstein2_1d: empty sample");
  std::vector<double> sa(a.begin(), a.end());
  std::vector<double> sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());

  // Both quantile functions are step functions; walk the merged grid in
  // integer units of 1/(n*m) so segment boundaries are exact.
  const std::size_t n = sa.size();
  const std::size_t m = sb.size();
  const unsigned long long total = static_cast<unsigned long long>(n) * m;
  unsigned long long pos = 0;
  std::size_t i = 0;
  std::size_t j = 0;
  double cost = 0.0;
  while (pos < total) {
    const unsigned long long a_end = static_cast<unsigned long long>(i + 1) * m;
    const unsigned long long b_end = static_cast<unsigned long long>(j + 1) * n;
    const unsigned long long next = std::min(a_end, b_end);
    const double diff = sa[i] - sb[j];
    cost += static_cast<double>(next - pos) * diff * diff;
    if (next == a_end) ++i;
    if (next == b_end) ++j;
    pos = next;
  }
  return std::sqrt(cost / static_cast<double>(total));
}

double ks_statistic(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks_statistic: empty sample");
  std::vector<double> sa(a.begin(), a.end());
  std::vector<double> sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());
  const double n = static_cast<double>(sa.size());
  const double m = static_cast<double>(sb.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < sa.size() || j < sb.size()) {
    double v;
    if (i < sa.size() && j < sb.size()) {
      v = std::min(sa[i], sb[j]);
    } else if (i < sa.size()) {
      v = sa[i];
    } else {
      v = sb[j];
    }
    while (i < sa.size() && sa[i] == v) ++i;
    while (j < sb.size() && sb[j] == v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / n - static_cast<double>(j) / m));
  }
  return d;
}

double kl_divergence(std::span<const double> a, std::span<const double> b, std::size_t bins,
                     double eps) {
  if (a.empty() || b.empty()) throw std::invalid_argument("kl_divergence: empty sample");
  if (bins < 2) throw std::invalid_argument("kl_divergence: bins >= 2 required");
  double lo = a[0];
  double hi = a[0];
  for (double v : a) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  for (double v : b) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (!(hi > lo)) return 0.0;  // degenerate pooled range

  const auto histogram = [&](std::span<const double> s) {
    std::vector<double> h(bins, 0.0);
    const double scale = static_cast<double>(bins) / (hi - lo);
    for (double v : s) {
      auto idx = static_cast<std::size_t>((v - lo) * scale);
      if (idx >= bins) idx = bins - 1;  // hi lands in the last bin
      h[idx] += 1.0;
    }
    double norm = 0.0;
    for (double& c : h) {
      c = c / static_cast<double>(s.size()) + eps;
      norm += c;
    }
    for (double& c : h) c /= norm;
    return h;
  };

  const std::vector<double> p = histogram(a);
  const std::vector<double> q = histogram(b);
  double kl = 0.0;
  for (std::size_t k = 0; k < bins; ++k) {
    kl += p[k] * std::log(p[k] / q[k]);
  }
  return kl;
}

SampleStats sample_stats(const Matrix& truth, const Matrix& imputed, const Mask& mask) {
  if (!truth.same_shape(imputed) || mask.rows != truth.rows || mask.cols != truth.cols) {
    throw std::invalid_argument("sample_stats: shape mismatch");
  }
  double sq = 0.0;
  double ab = 0.0;
  double sum_true = 0.0;
  std::size_t k = 0;
  for (std::size_t i = 0; i < truth.rows; ++i) {
    for (std::size_t j = 0; j < truth.cols; ++j) {
      if (!mask.at(i, j)) continue;
      const double d = imputed.at(i, j) - truth.at(i, j);
      sq += d * d;
      ab += std::abs(d);
      sum_true += truth.at(i, j);
      ++k;
    }
  }
  if (k == 0) throw std::invalid_argument("sample_stats: no masked cells");
  const double kk = static_cast<double>(k);
  const double mean_true = sum_true / kk;
  double ss_true = 0.0;
  for (std::size_t i = 0; i < truth.rows; ++i) {
    for (std::size_t j = 0; j < truth.cols; ++j) {
      if (!mask.at(i, j)) continue;
      const double c = truth.at(i, j) - mean_true;
      ss_true += c * c;
    }
  }
  SampleStats s;
  s.rmse = std::sqrt(sq / kk);
  s.mae = ab / kk;
  s.r2 = (ss_true > 0.0) ? 1.0 - sq / ss_true : missing_value();
  return s;
}

double lower_median(std::vector<double> v) {
  if (v.empty()) throw std::invalid_argument("lower_median: empty sample");
  const std::size_t mid = (v.size() - 1) / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  return v[mid];
}

FeatureStats feature_stats(const Matrix& truth, const Matrix& imputed, const Mask& mask,
                           std::size_t bins, double eps) {
  if (!truth.same_shape(imputed) || mask.rows != truth.rows || mask.cols != truth.cols) {
    throw std::invalid_argument("feature_stats: shape mismatch");
  }
  FeatureStats out;
  std::vector<double> kls;
  std::vector<double> kss;
  std::vector<double> w2s;
  for (std::size_t j = 0; j < truth.cols; ++j) {
    std::vector<double> tru;
    std::vector<double> imp;
    for (std::size_t i = 0; i < truth.rows; ++i) {
      if (mask.at(i, j)) {
        tru.push_back(truth.at(i, j));
        imp.push_back(imputed.at(i, j));
      }
    }
    if (tru.empty()) continue;
    FeatureDistances fd;
    fd.kl = kl_divergence(tru, imp, bins, eps);
    fd.ks = ks_statistic(tru, imp);
    fd.w2 = wasserstein2_1d(tru, imp);
    kls.push_back(fd.kl);
    kss.push_back(fd.ks);
    w2s.push_back(fd.w2);
    out.per_feature.emplace_back(j, fd);
  }
  if (out.per_feature.empty()) {
    throw std::invalid_argument("feature_stats: no feature has masked cells");
  }
  out.min = {*std::min_element(kls.begin(), kls.end()),
             *std::min_element(kss.begin(), kss.end()),
             *std::min_element(w2s.begin(), w2s.end())};
  out.median = {lower_median(kls), lower_median(kss), lower_median(w2s)};
  out.max = {*std::max_element(kls.begin(), kls.end()),
             *std::max_element(kss.begin(), kss.end()),
             *std::max_element(w2s.begin(), w2s.end())};
  return out;
}

}  // namespace imputeval
