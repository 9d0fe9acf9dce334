#include "imputeval/report.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include <json.hpp>

#include "imputeval/correlate.hpp"
#include "imputeval/csv.hpp"
#include "imputeval/jsonout.hpp"

namespace imputeval {

namespace {

std::string rate_text(double r) { return std::isnan(r) ? "natural" : format_double(r); }

double rate_order(double r) { return std::isnan(r) ? -1.0 : r; }

}  // namespace

std::string CellKey::canonical() const {
  return "h=" + std::to_string(holdout) + ":v=" + std::to_string(fold) + ":imp=" + imputer +
         ":k=" + std::to_string(repeat) + ":tr=" + rate_text(train_rate) +
         ":te=" + rate_text(test_rate);
}

bool CellKey::operator<(const CellKey& o) const {
  return std::tuple(holdout, fold, imputer, repeat, rate_order(train_rate), rate_order(test_rate)) <
         std::tuple(o.holdout, o.fold, o.imputer, o.repeat, rate_order(o.train_rate),
                    rate_order(o.test_rate));
}

bool CellKey::operator==(const CellKey& o) const {
  return holdout == o.holdout && fold == o.fold && imputer == o.imputer && repeat == o.repeat &&
         rate_order(train_rate) == rate_order(o.train_rate) &&
         rate_order(test_rate) == rate_order(o.test_rate);
}

bool QualityReport::has_errors() const {
  return std::any_of(cells.begin(), cells.end(),
                     [](const auto& c) { return !c.second.error.empty(); });
}

const std::vector<std::string>& discrepancy_statistic_names() {
  static const std::vector<std::string> names = {"rmse", "mae",  "r2",   "b_kl", "b_ks",
                                                 "b_w2", "c_kl", "c_ks", "c_w2"};
  return names;
}

double statistic_value(const CellResult& cell, const std::string& name) {
  if (!cell.error.empty() || !cell.has_quality) return missing_value();
  if (name == "rmse") return cell.sample.rmse;
  if (name == "mae") return cell.sample.mae;
  if (name == "r2") return cell.sample.r2;
  if (name == "b_kl") return cell.feature.median.kl;
  if (name == "b_ks") return cell.feature.median.ks;
  if (name == "b_w2") return cell.feature.median.w2;
  if (name == "c_kl") return cell.sliced.kl;
  if (name == "c_ks") return cell.sliced.ks;
  if (name == "c_w2") return cell.sliced.w2;
  throw std::invalid_argument("unknown statistic: " + name);
}

std::vector<CorrelationEntry> correlate_quality_vs_auc(const QualityReport& report) {
  // Strata: distinct test rates present in the cells.
  std::vector<double> strata;
  for (const auto& [key, cell] : report.cells) {
    const double r = rate_order(key.test_rate);
    if (std::find(strata.begin(), strata.end(), r) == strata.end()) strata.push_back(r);
  }
  std::sort(strata.begin(), strata.end());

  std::vector<CorrelationEntry> out;
  for (const std::string& stat : discrepancy_statistic_names()) {
    for (double stratum : strata) {
      std::vector<double> xs;
      std::vector<double> ys;
      for (const auto& [key, cell] : report.cells) {
        if (rate_order(key.test_rate) != stratum) continue;
        if (!cell.error.empty() || !cell.has_downstream) continue;
        const double x = statistic_value(cell, stat);
        if (std::isnan(x)) continue;
        xs.push_back(x);
        ys.push_back(cell.downstream.auc);
      }
      CorrelationEntry e;
      e.statistic = stat;
      e.test_rate = (stratum < 0.0) ? missing_value() : stratum;
      e.n = xs.size();
      if (xs.size() >= 3) {
        e.pearson_r = pearson(xs, ys);
        e.spearman_r = spearman(xs, ys);
      } else {
        e.pearson_r = missing_value();
        e.spearman_r = missing_value();
      }
      out.push_back(std::move(e));
    }
  }
  return out;
}

MetricMatrix correlate_metrics(const QualityReport& report) {
  MetricMatrix mm;
  mm.names = discrepancy_statistic_names();
  const std::size_t k = mm.names.size();
  mm.pearson_r.assign(k, std::vector<double>(k, missing_value()));
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = a; b < k; ++b) {
      std::vector<double> xs;
      std::vector<double> ys;
      for (const auto& [key, cell] : report.cells) {
        const double x = statistic_value(cell, mm.names[a]);
        const double y = statistic_value(cell, mm.names[b]);
        if (std::isnan(x) || std::isnan(y)) continue;
        xs.push_back(x);
        ys.push_back(y);
      }
      double r = missing_value();
      if (a == b) {
        r = xs.empty() ? missing_value() : 1.0;
      } else if (xs.size() >= 3) {
        r = pearson(xs, ys);
      }
      mm.pearson_r[a][b] = r;
      mm.pearson_r[b][a] = r;
    }
  }
  return mm;
}

namespace {

JVal key_json(const CellKey& key) {
  JVal j = JVal::object();
  j.set("holdout", JVal::integer(static_cast<long long>(key.holdout)));
  j.set("fold", JVal::integer(static_cast<long long>(key.fold)));
  j.set("imputer", JVal::str(key.imputer));
  j.set("repeat", JVal::integer(static_cast<long long>(key.repeat)));
  j.set("train_rate", JVal::real(key.train_rate));
  j.set("test_rate", JVal::real(key.test_rate));
  return j;
}

JVal metrics_json(const EvalMetrics& m) {
  JVal j = JVal::object();
  j.set("auc", JVal::real(m.auc));
  j.set("accuracy", JVal::real(m.accuracy));
  j.set("brier", JVal::real(m.brier));
  j.set("precision", JVal::real(m.precision));
  j.set("sensitivity", JVal::real(m.sensitivity));
  j.set("specificity", JVal::real(m.specificity));
  return j;
}

JVal feature_distances_json(const FeatureDistances& d) {
  JVal j = JVal::object();
  j.set("kl", JVal::real(d.kl));
  j.set("ks", JVal::real(d.ks));
  j.set("w2", JVal::real(d.w2));
  return j;
}

JVal cell_json(const CellKey& key, const CellResult& cell) {
  JVal j = JVal::object();
  j.set("key", key_json(key));
  if (!cell.error.empty()) j.set("error", JVal::str(cell.error));
  if (!cell.skip_reason.empty()) j.set("skip_reason", JVal::str(cell.skip_reason));
  if (cell.has_quality) {
    JVal sample = JVal::object();
    sample.set("rmse", JVal::real(cell.sample.rmse));
    sample.set("mae", JVal::real(cell.sample.mae));
    sample.set("r2", JVal::real(cell.sample.r2));
    j.set("sample", std::move(sample));
    JVal feature = JVal::object();
    feature.set("min", feature_distances_json(cell.feature.min));
    feature.set("median", feature_distances_json(cell.feature.median));
    feature.set("max", feature_distances_json(cell.feature.max));
    j.set("feature", std::move(feature));
    JVal sliced = JVal::object();
    sliced.set("kl", JVal::real(cell.sliced.kl));
    sliced.set("ks", JVal::real(cell.sliced.ks));
    sliced.set("w2", JVal::real(cell.sliced.w2));
    sliced.set("ratio_median", JVal::real(cell.sliced.ratio_median));
    sliced.set("ratio_iqr", JVal::real(cell.sliced.ratio_iqr));
    sliced.set("guarded", JVal::integer(static_cast<long long>(cell.sliced.guarded)));
    sliced.set("skipped", JVal::integer(static_cast<long long>(cell.sliced.skipped)));
    j.set("sliced", std::move(sliced));
  }
  if (cell.has_downstream) {
    j.set("downstream", metrics_json(cell.downstream));
    j.set("max_iter", JVal::integer(static_cast<long long>(cell.max_iter)));
  }
  return j;
}

JVal config_json(const RunConfig& c) {
  JVal j = JVal::object();
  j.set("source", JVal::str(c.source));
  j.set("synth_n", JVal::integer(static_cast<long long>(c.synth_n)));
  j.set("synth_d", JVal::integer(static_cast<long long>(c.synth_d)));
  j.set("synth_sep", JVal::real(c.synth_sep));
  j.set("csv_path", JVal::str(c.csv_path));
  j.set("csv_schema", JVal::str(c.csv_schema));
  j.set("csv_label", JVal::str(c.csv_label));
  JVal tr = JVal::array();
  for (double r : c.train_rates) tr.push(JVal::real(r));
  j.set("train_rates", std::move(tr));
  JVal te = JVal::array();
  for (double r : c.test_rates) te.push(JVal::real(r));
  j.set("test_rates", std::move(te));
  JVal imps = JVal::array();
  for (const auto& m : c.imputers) imps.push(JVal::str(m));
  j.set("imputers", std::move(imps));
  j.set("repeats", JVal::integer(static_cast<long long>(c.repeats)));
  j.set("mice_iterations", JVal::integer(static_cast<long long>(c.mice.iterations)));
  j.set("mice_donors", JVal::integer(static_cast<long long>(c.mice.donors)));
  j.set("mice_ridge", JVal::real(c.mice.ridge));
  j.set("external_prefix", JVal::str(c.external_prefix));
  j.set("sliced_m", JVal::integer(static_cast<long long>(c.sliced_m)));
  j.set("sliced_p", JVal::integer(static_cast<long long>(c.sliced_p)));
  j.set("bins", JVal::integer(static_cast<long long>(c.bins)));
  j.set("kl_eps", JVal::real(c.kl_eps));
  JVal cands = JVal::array();
  for (std::size_t v : c.max_iter_candidates) cands.push(JVal::integer(static_cast<long long>(v)));
  j.set("max_iter_candidates", std::move(cands));
  j.set("pool_by_vote", JVal::boolean(c.pool_by_vote));
  JVal thr = JVal::array();
  for (double t : c.outlier_thresholds) thr.push(JVal::real(t));
  j.set("outlier_thresholds", std::move(thr));
  j.set("master_seed", JVal::integer(static_cast<long long>(c.master_seed)));
  j.set("out_dir", JVal::str(c.out_dir));
  return j;
}

std::string csv_field(double v) { return std::isnan(v) ? "" : format_double(v); }

}  // namespace

void emit_report(const QualityReport& report, const std::string& dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory: " + dir);

  // report.json
  {
    JVal root = JVal::object();
    root.set("version", JVal::str(report.version));
    root.set("config", config_json(report.config));
    JVal cells = JVal::array();
    for (const auto& [key, cell] : report.cells) cells.push(cell_json(key, cell));
    root.set("cells", std::move(cells));
    JVal pooled = JVal::array();
    for (const auto& p : report.pooled) {
      JVal item = JVal::object();
      item.set("key", key_json(p.key));
      item.set("metrics", metrics_json(p.metrics));
      pooled.push(std::move(item));
    }
    root.set("pooled", std::move(pooled));
    JVal outliers = JVal::array();
    for (const auto& o : report.outliers) {
      JVal item = JVal::object();
      item.set("key", key_json(o.key));
      JVal props = JVal::object();
      for (const auto& [t, frac] : o.proportions) props.set(format_double(t), JVal::real(frac));
      item.set("proportions", std::move(props));
      outliers.push(std::move(item));
    }
    root.set("outliers", std::move(outliers));
    JVal corr = JVal::object();
    JVal qva = JVal::array();
    for (const auto& e : report.quality_vs_auc) {
      JVal item = JVal::object();
      item.set("statistic", JVal::str(e.statistic));
      item.set("test_rate", JVal::real(e.test_rate));
      item.set("pearson", JVal::real(e.pearson_r));
      item.set("spearman", JVal::real(e.spearman_r));
      item.set("n", JVal::integer(static_cast<long long>(e.n)));
      qva.push(std::move(item));
    }
    corr.set("quality_vs_auc", std::move(qva));
    JVal mm = JVal::object();
    JVal names = JVal::array();
    for (const auto& n : report.metric_matrix.names) names.push(JVal::str(n));
    mm.set("metrics", std::move(names));
    JVal rows = JVal::array();
    for (const auto& row : report.metric_matrix.pearson_r) {
      JVal r = JVal::array();
      for (double v : row) r.push(JVal::real(v));
      rows.push(std::move(r));
    }
    mm.set("pearson", std::move(rows));
    corr.set("metric_matrix", std::move(mm));
    root.set("correlations", std::move(corr));

    const std::string path = dir + "/report.json";
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    root.write(out);
    out << "\n";
  }

  // cells.csv
  {
    const std::string path = dir + "/cells.csv";
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "holdout,fold,imputer,repeat,train_rate,test_rate,"
        << "rmse,mae,r2,"
        << "kl_min,kl_median,kl_max,ks_min,ks_median,ks_max,w2_min,w2_median,w2_max,"
        << "c_kl,c_ks,c_w2,ratio_median,ratio_iqr,guarded,skipped,"
        << "auc,accuracy,brier,precision,sensitivity,specificity,max_iter,skip_reason,error\n";
    for (const auto& [key, cell] : report.cells) {
      out << key.holdout << ',' << key.fold << ',' << key.imputer << ',' << key.repeat << ','
          << csv_field(key.train_rate) << ',' << csv_field(key.test_rate) << ',';
      if (cell.has_quality) {
        out << csv_field(cell.sample.rmse) << ',' << csv_field(cell.sample.mae) << ','
            << csv_field(cell.sample.r2) << ',' << csv_field(cell.feature.min.kl) << ','
            << csv_field(cell.feature.median.kl) << ',' << csv_field(cell.feature.max.kl) << ','
            << csv_field(cell.feature.min.ks) << ',' << csv_field(cell.feature.median.ks) << ','
            << csv_field(cell.feature.max.ks) << ',' << csv_field(cell.feature.min.w2) << ','
            << csv_field(cell.feature.median.w2) << ',' << csv_field(cell.feature.max.w2) << ','
            << csv_field(cell.sliced.kl) << ',' << csv_field(cell.sliced.ks) << ','
            << csv_field(cell.sliced.w2) << ',' << csv_field(cell.sliced.ratio_median) << ','
            << csv_field(cell.sliced.ratio_iqr) << ',' << cell.sliced.guarded << ','
            << cell.sliced.skipped << ',';
      } else {
        out << ",,,,,,,,,,,,,,,,,,,";
      }
      if (cell.has_downstream) {
        out << csv_field(cell.downstream.auc) << ',' << csv_field(cell.downstream.accuracy) << ','
            << csv_field(cell.downstream.brier) << ',' << csv_field(cell.downstream.precision)
            << ',' << csv_field(cell.downstream.sensitivity) << ','
            << csv_field(cell.downstream.specificity) << ',' << cell.max_iter << ',';
      } else {
        out << ",,,,,,,";
      }
      out << cell.skip_reason << ',' << cell.error << "\n";
    }
  }

  // sliced_raw.csv
  {
    const std::string path = dir + "/sliced_raw.csv";
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "holdout,imputer,repeat,train_rate,test_rate,r,p,w,w_hat,skipped\n";
    for (const auto& row : report.sliced_raw) {
      out << row.key.holdout << ',' << row.key.imputer << ',' << row.key.repeat << ','
          << csv_field(row.key.train_rate) << ',' << csv_field(row.key.test_rate) << ',' << row.r
          << ',' << row.p << ',' << csv_field(row.w) << ',' << csv_field(row.w_hat) << ','
          << (row.skipped ? 1 : 0) << "\n";
    }
  }

  // correlations.csv: quality-vs-AUC rows, then the metric-pair matrix in
  // long format.
  {
    const std::string path = dir + "/correlations.csv";
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "kind,statistic,statistic_b,test_rate,pearson,spearman,n\n";
    for (const auto& e : report.quality_vs_auc) {
      out << "quality_vs_auc," << e.statistic << ",," << csv_field(e.test_rate) << ','
          << csv_field(e.pearson_r) << ',' << csv_field(e.spearman_r) << ',' << e.n << "\n";
    }
    for (std::size_t a = 0; a < report.metric_matrix.names.size(); ++a) {
      for (std::size_t b = 0; b < report.metric_matrix.names.size(); ++b) {
        out << "metric_pair," << report.metric_matrix.names[a] << ','
            << report.metric_matrix.names[b] << ",," << csv_field(report.metric_matrix.pearson_r[a][b])
            << ",,\n";
      }
    }
  }
}

namespace {

double json_real(const nlohmann::json& j) {
  return j.is_null() ? missing_value() : j.get<double>();
}

CellKey key_from_json(const nlohmann::json& j) {
  CellKey key;
  key.holdout = j.at("holdout").get<std::size_t>();
  key.fold = j.at("fold").get<std::size_t>();
  key.imputer = j.at("imputer").get<std::string>();
  key.repeat = j.at("repeat").get<std::size_t>();
  key.train_rate = json_real(j.at("train_rate"));
  key.test_rate = json_real(j.at("test_rate"));
  return key;
}

EvalMetrics metrics_from_json(const nlohmann::json& j) {
  EvalMetrics m;
  m.auc = json_real(j.at("auc"));
  m.accuracy = json_real(j.at("accuracy"));
  m.brier = json_real(j.at("brier"));
  m.precision = json_real(j.at("precision"));
  m.sensitivity = json_real(j.at("sensitivity"));
  m.specificity = json_real(j.at("specificity"));
  return m;
}

FeatureDistances distances_from_json(const nlohmann::json& j) {
  FeatureDistances d;
  d.kl = json_real(j.at("kl"));
  d.ks = json_real(j.at("ks"));
  d.w2 = json_real(j.at("w2"));
  return d;
}

}  // namespace

QualityReport load_report(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open report: " + path);
  nlohmann::json j;
  in >> j;

  QualityReport report;
  report.version = j.at("version").get<std::string>();

  const auto& cj = j.at("config");
  RunConfig& c = report.config;
  c.source = cj.at("source").get<std::string>();
  c.synth_n = cj.at("synth_n").get<std::size_t>();
  c.synth_d = cj.at("synth_d").get<std::size_t>();
  c.synth_sep = cj.at("synth_sep").get<double>();
  c.csv_path = cj.at("csv_path").get<std::string>();
  c.csv_schema = cj.at("csv_schema").get<std::string>();
  c.csv_label = cj.at("csv_label").get<std::string>();
  c.train_rates = cj.at("train_rates").get<std::vector<double>>();
  c.test_rates = cj.at("test_rates").get<std::vector<double>>();
  c.imputers = cj.at("imputers").get<std::vector<std::string>>();
  c.repeats = cj.at("repeats").get<std::size_t>();
  c.mice.iterations = cj.at("mice_iterations").get<std::size_t>();
  c.mice.donors = cj.at("mice_donors").get<std::size_t>();
  c.mice.ridge = cj.at("mice_ridge").get<double>();
  c.external_prefix = cj.at("external_prefix").get<std::string>();
  c.sliced_m = cj.at("sliced_m").get<std::size_t>();
  c.sliced_p = cj.at("sliced_p").get<std::size_t>();
  c.bins = cj.at("bins").get<std::size_t>();
  c.kl_eps = cj.at("kl_eps").get<double>();
  c.max_iter_candidates = cj.at("max_iter_candidates").get<std::vector<std::size_t>>();
  c.pool_by_vote = cj.at("pool_by_vote").get<bool>();
  c.outlier_thresholds = cj.at("outlier_thresholds").get<std::vector<double>>();
  c.master_seed = cj.at("master_seed").get<std::uint64_t>();
  c.master_seed_set = true;
  c.out_dir = cj.at("out_dir").get<std::string>();

  for (const auto& item : j.at("cells")) {
    CellKey key = key_from_json(item.at("key"));
    CellResult cell;
    if (item.contains("error")) cell.error = item.at("error").get<std::string>();
    if (item.contains("skip_reason")) cell.skip_reason = item.at("skip_reason").get<std::string>();
    if (item.contains("sample")) {
      cell.has_quality = true;
      cell.sample.rmse = json_real(item.at("sample").at("rmse"));
      cell.sample.mae = json_real(item.at("sample").at("mae"));
      cell.sample.r2 = json_real(item.at("sample").at("r2"));
      cell.feature.min = distances_from_json(item.at("feature").at("min"));
      cell.feature.median = distances_from_json(item.at("feature").at("median"));
      cell.feature.max = distances_from_json(item.at("feature").at("max"));
      const auto& sj = item.at("sliced");
      cell.sliced.kl = json_real(sj.at("kl"));
      cell.sliced.ks = json_real(sj.at("ks"));
      cell.sliced.w2 = json_real(sj.at("w2"));
      cell.sliced.ratio_median = json_real(sj.at("ratio_median"));
      cell.sliced.ratio_iqr = json_real(sj.at("ratio_iqr"));
      cell.sliced.guarded = sj.at("guarded").get<std::size_t>();
      cell.sliced.skipped = sj.at("skipped").get<std::size_t>();
    }
    if (item.contains("downstream")) {
      cell.has_downstream = true;
      cell.downstream = metrics_from_json(item.at("downstream"));
      cell.max_iter = item.at("max_iter").get<std::size_t>();
    }
    report.cells.emplace_back(std::move(key), std::move(cell));
  }

  for (const auto& item : j.at("pooled")) {
    PooledResult p;
    p.key = key_from_json(item.at("key"));
    p.metrics = metrics_from_json(item.at("metrics"));
    report.pooled.push_back(std::move(p));
  }
  for (const auto& item : j.at("outliers")) {
    OutlierEntry o;
    o.key = key_from_json(item.at("key"));
    for (const auto& [t, frac] : item.at("proportions").items()) {
      o.proportions[std::stod(t)] = json_real(frac);
    }
    report.outliers.push_back(std::move(o));
  }
  const auto& corr = j.at("correlations");
  for (const auto& item : corr.at("quality_vs_auc")) {
    CorrelationEntry e;
    e.statistic = item.at("statistic").get<std::string>();
    e.test_rate = json_real(item.at("test_rate"));
    e.pearson_r = json_real(item.at("pearson"));
    e.spearman_r = json_real(item.at("spearman"));
    e.n = item.at("n").get<std::size_t>();
    report.quality_vs_auc.push_back(std::move(e));
  }
  const auto& mm = corr.at("metric_matrix");
  report.metric_matrix.names = mm.at("metrics").get<std::vector<std::string>>();
  for (const auto& row : mm.at("pearson")) {
    std::vector<double> r;
    for (const auto& v : row) r.push_back(json_real(v));
    report.metric_matrix.pearson_r.push_back(std::move(r));
  }
  return report;
}

}  // namespace imputeval
