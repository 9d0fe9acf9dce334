#pragma once

#include <map>
#include <string>
#include <vector>

#include "imputeval/config.hpp"
#include "imputeval/discrepancy.hpp"
#include "imputeval/downstream.hpp"
#include "imputeval/sliced.hpp"

namespace imputeval {

inline constexpr const char* kVersion = "imputeval 0.1.0";

// One experiment cell: a single (holdout, validation fold, imputer, repeat,
// train rate, test rate) configuration. Rates are NaN when the data carries
// its natural missingness.
struct CellKey {
  std::size_t holdout = 0;
  std::size_t fold = 0;
  std::string imputer;
  std::size_t repeat = 0;
  double train_rate = 0.0;
  double test_rate = 0.0;

  std::string canonical() const;
  bool operator<(const CellKey& o) const;
  bool operator==(const CellKey& o) const;
};

struct FeatureSummary {
  FeatureDistances min;
  FeatureDistances median;
  FeatureDistances max;
};

struct ClassCSummary {
  double kl = 0.0;
  double ks = 0.0;
  double w2 = 0.0;
  double ratio_median = 0.0;
  double ratio_iqr = 0.0;
  std::size_t guarded = 0;
  std::size_t skipped = 0;
};

struct CellResult {
  bool has_quality = false;
  SampleStats sample;
  FeatureSummary feature;
  ClassCSummary sliced;
  bool has_downstream = false;
  EvalMetrics downstream;
  std::size_t max_iter = 0;
  std::string skip_reason;  // quality or downstream family skipped, with cause
  std::string error;        // hard per-cell failure; other fields invalid
};

// Downstream metrics of the repeat-pooled predictions, one per
// (holdout, fold, imputer, train rate, test rate).
struct PooledResult {
  CellKey key;  // repeat field unused (0)
  EvalMetrics metrics;
};

// Raw sliced distances for external plotting, one grid per
// (holdout, imputer, repeat, train rate, test rate).
struct SlicedRaw {
  CellKey key;  // fold field unused (0)
  std::size_t r = 0;
  std::size_t p = 0;
  double w = 0.0;
  double w_hat = 0.0;
  bool skipped = false;
};

struct OutlierEntry {
  CellKey key;  // fold/repeat unused
  std::map<double, double> proportions;  // threshold -> fraction above
};

struct CorrelationEntry {
  std::string statistic;
  double test_rate = 0.0;  // stratum
  double pearson_r = 0.0;
  double spearman_r = 0.0;
  std::size_t n = 0;
};

struct MetricMatrix {
  std::vector<std::string> names;
  std::vector<std::vector<double>> pearson_r;
};

struct QualityReport {
  std::string version = kVersion;
  RunConfig config;
  std::vector<std::pair<CellKey, CellResult>> cells;  // sorted by key
  std::vector<PooledResult> pooled;
  std::vector<SlicedRaw> sliced_raw;
  std::vector<OutlierEntry> outliers;
  std::vector<CorrelationEntry> quality_vs_auc;
  MetricMatrix metric_matrix;

  bool has_errors() const;
};

// The nine discrepancy statistics used in the correlation tables, in report
// order: class A (rmse, mae, r2), class B medians, class C.
const std::vector<std::string>& discrepancy_statistic_names();
// Value of a named statistic for one cell; NaN when unavailable.
double statistic_value(const CellResult& cell, const std::string& name);

std::vector<CorrelationEntry> correlate_quality_vs_auc(const QualityReport& report);
MetricMatrix correlate_metrics(const QualityReport& report);

// Writes report.json (key-sorted, 17 significant digits), cells.csv,
// sliced_raw.csv and correlations.csv into `dir`.
void emit_report(const QualityReport& report, const std::string& dir);

// Reads back a report.json produced by emit_report.
QualityReport load_report(const std::string& path);

}  // namespace imputeval
