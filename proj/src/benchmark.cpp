#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <tuple>

#include "imputeval/csv.hpp"
#include "imputeval/missingness.hpp"
#include "imputeval/partition.hpp"
#include "imputeval/pipeline.hpp"
#include "imputeval/rng.hpp"
#include "imputeval/synth.hpp"

namespace imputeval {

std::size_t effective_workers(std::size_t requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("IMPUTEVAL_WORKERS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<std::size_t>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn,
                  std::size_t workers) {
  const std::size_t k = std::min(effective_workers(workers), std::max<std::size_t>(n, 1));
  if (k <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr first_error;
  std::mutex error_mutex;
  pool.reserve(k);
  for (std::size_t t = 0; t < k; ++t) {
    pool.emplace_back([&] {
      while (true) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n) break;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

Dataset subset_rows(const Dataset& ds, const std::vector<std::size_t>& rows) {
  Dataset out;
  out.schema = ds.schema;
  out.values = Matrix(rows.size(), ds.n_cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    std::copy_n(&ds.values.data[rows[i] * ds.n_cols()], ds.n_cols(),
                &out.values.data[i * ds.n_cols()]);
  }
  if (ds.labels) {
    std::vector<int> labels;
    labels.reserve(rows.size());
    for (std::size_t i : rows) labels.push_back((*ds.labels)[i]);
    out.labels = std::move(labels);
  }
  return out;
}

namespace {

struct Unit {
  std::size_t holdout;
  double train_rate;  // NaN in natural-missingness mode
  double test_rate;
  std::string imputer;
};

struct UnitOutcome {
  std::vector<std::pair<CellKey, CellResult>> cells;
  std::vector<PooledResult> pooled;
  std::vector<SlicedRaw> sliced_raw;
  std::map<std::pair<std::size_t, std::size_t>, double> outlier_w2;  // (feature, repeat)
};

std::string unit_tag(const Unit& u) {
  return "h=" + std::to_string(u.holdout) + ":tr=" +
         (std::isnan(u.train_rate) ? "natural" : format_double(u.train_rate)) + ":te=" +
         (std::isnan(u.test_rate) ? "natural" : format_double(u.test_rate)) +
         ":imp=" + u.imputer;
}

struct BenchmarkContext {
  const RunConfig& cfg;
  const Dataset& data;
  const SplitPlan& plan;
  bool natural;
  std::size_t sliced_m;
};

UnitOutcome run_unit(const BenchmarkContext& ctx, const Unit& unit) {
  const RunConfig& cfg = ctx.cfg;
  const std::size_t n_folds = ctx.plan.folds[unit.holdout].size();

  UnitOutcome out;
  const auto cell_key = [&](std::size_t fold, std::size_t repeat) {
    return CellKey{unit.holdout, fold, unit.imputer, repeat, unit.train_rate, unit.test_rate};
  };
  for (std::size_t k = 0; k < cfg.repeats; ++k) {
    for (std::size_t v = 0; v < n_folds; ++v) {
      out.cells.emplace_back(cell_key(v, k), CellResult{});
    }
  }
  const auto cell_at = [&](std::size_t fold, std::size_t repeat) -> CellResult& {
    return out.cells[repeat * n_folds + fold].second;
  };
  const auto fail_all = [&](const std::string& message) {
    for (auto& [key, cell] : out.cells) {
      if (cell.error.empty()) cell.error = message;
    }
  };

  try {
    const auto& dev_idx = ctx.plan.developments[unit.holdout];
    const auto& hold_idx = ctx.plan.holdouts[unit.holdout];
    const Dataset dev = subset_rows(ctx.data, dev_idx);
    const Dataset hold = subset_rows(ctx.data, hold_idx);

    Mask dev_mask;
    Mask hold_mask;
    std::string quality_skip;
    if (ctx.natural) {
      dev_mask = mask_from_missing(dev);
      hold_mask = mask_from_missing(hold);
      quality_skip = "no ground truth: data carries natural missingness";
    } else {
      MissingnessSpec dev_spec{unit.train_rate,
                               derive_seed(cfg.master_seed, "mask:part=dev:" + unit_tag(unit)),
                               false};
      MissingnessSpec hold_spec{unit.test_rate,
                                derive_seed(cfg.master_seed, "mask:part=holdout:" + unit_tag(unit)),
                                false};
      dev_mask = induce_mcar(dev, dev_spec);
      hold_mask = induce_mcar(hold, hold_spec);
    }

    // Development-set statistics drive normalization for every metric and
    // the classifier inputs; masked cells are excluded.
    const Dataset masked_dev = apply_mask(dev, dev_mask);
    std::vector<std::size_t> all_dev_rows(dev.n_rows());
    for (std::size_t i = 0; i < dev.n_rows(); ++i) all_dev_rows[i] = i;
    const Normalizer nz = fit_normalizer(masked_dev, all_dev_rows);

    ImputerConfig icfg;
    icfg.method = impute_method_from_string(unit.imputer);
    icfg.mice = cfg.mice;
    icfg.repeats = cfg.repeats;
    if (icfg.method == ImputeMethod::External) {
      throw std::invalid_argument(
          "external imputations are evaluated via `imputeval evaluate`, not in the benchmark grid");
    }
    icfg.seed = derive_seed(cfg.master_seed, "impute:part=dev:" + unit_tag(unit));
    ImputationSet dev_imps = impute_multiple(dev, dev_mask, dev, dev_mask, icfg);
    icfg.seed = derive_seed(cfg.master_seed, "impute:part=holdout:" + unit_tag(unit));
    ImputationSet hold_imps = impute_multiple(dev, dev_mask, hold, hold_mask, icfg);
    for (auto& c : dev_imps.completions) c = postprocess_imputed(c);
    for (auto& c : hold_imps.completions) c = postprocess_imputed(c);

    const Dataset norm_hold_truth = ctx.natural ? Dataset{} : apply_normalizer(hold, nz);
    std::vector<Dataset> norm_dev(cfg.repeats);
    std::vector<Dataset> norm_hold(cfg.repeats);
    for (std::size_t k = 0; k < cfg.repeats; ++k) {
      norm_dev[k] = apply_normalizer(dev_imps.completions[k], nz);
      norm_hold[k] = apply_normalizer(hold_imps.completions[k], nz);
    }

    // Quality metrics: imputed holdout against ground truth, identical for
    // every validation fold of the same repeat.
    if (!ctx.natural) {
      const DirectionSet dirs = sample_unit_directions(
          ctx.data.n_cols(), ctx.sliced_m,
          derive_seed(cfg.master_seed, "dirs:h=" + std::to_string(unit.holdout)));
      const HalfPartitionSet halves = make_half_partitions(
          hold.n_rows(), cfg.sliced_p,
          derive_seed(cfg.master_seed, "halves:h=" + std::to_string(unit.holdout)));
      for (std::size_t k = 0; k < cfg.repeats; ++k) {
        try {
          const SampleStats sample =
              sample_stats(norm_hold_truth.values, norm_hold[k].values, hold_mask);
          const FeatureStats feature = feature_stats(norm_hold_truth.values, norm_hold[k].values,
                                                     hold_mask, cfg.bins, cfg.kl_eps);
          const SlicedResult sliced =
              sliced_distances(norm_hold_truth.values, norm_hold[k].values, dirs, halves);
          const ClassCStats cstats = class_c_stats(sliced, cfg.bins, cfg.kl_eps);
          for (const auto& [col, dist] : feature.per_feature) {
            out.outlier_w2[{col, k}] = dist.w2;
          }
          CellKey raw_key{unit.holdout, 0, unit.imputer, k, unit.train_rate, unit.test_rate};
          for (std::size_t r = 0; r < sliced.w.rows; ++r) {
            for (std::size_t p = 0; p < sliced.w.cols; ++p) {
              const bool skipped = is_missing(sliced.w.at(r, p));
              out.sliced_raw.push_back(
                  {raw_key, r, p, sliced.w.at(r, p), sliced.w_hat.at(r, p), skipped});
            }
          }
          for (std::size_t v = 0; v < n_folds; ++v) {
            CellResult& cell = cell_at(v, k);
            cell.has_quality = true;
            cell.sample = sample;
            cell.feature = {feature.min, feature.median, feature.max};
            cell.sliced = {cstats.kl,          cstats.ks,      cstats.w2,     cstats.ratio_median,
                           cstats.ratio_iqr,   cstats.guarded, cstats.skipped};
          }
        } catch (const std::exception& e) {
          for (std::size_t v = 0; v < n_folds; ++v) {
            cell_at(v, k).error = std::string("quality: ") + e.what();
          }
        }
      }
    } else {
      for (auto& [key, cell] : out.cells) cell.skip_reason = quality_skip;
    }

    // Downstream: per repeat, pick max_iter on the validation folds, then one
    // classifier per fold; holdout predictions are pooled across repeats.
    if (ctx.data.labels) {
      const std::vector<int>& dev_labels = *dev.labels;
      const std::vector<int>& hold_labels = *hold.labels;

      // Global fold indices -> positions within the development subset.
      std::vector<std::size_t> global_to_local(ctx.data.n_rows(), 0);
      for (std::size_t i = 0; i < dev_idx.size(); ++i) global_to_local[dev_idx[i]] = i;
      std::vector<std::vector<std::size_t>> folds(n_folds);
      for (std::size_t v = 0; v < n_folds; ++v) {
        for (std::size_t g : ctx.plan.folds[unit.holdout][v]) {
          folds[v].push_back(global_to_local[g]);
        }
      }

      std::vector<std::vector<std::vector<double>>> probs(
          n_folds);  // [fold][repeat] -> holdout probabilities
      for (auto& f : probs) f.resize(cfg.repeats);

      for (std::size_t k = 0; k < cfg.repeats; ++k) {
        try {
          const std::size_t max_iter =
              select_max_iter(norm_dev[k].values, dev_labels, folds, cfg.max_iter_candidates);
          for (std::size_t v = 0; v < n_folds; ++v) {
            std::vector<std::uint8_t> in_fold(dev.n_rows(), 0);
            for (std::size_t i : folds[v]) in_fold[i] = 1;
            Matrix train_x(dev.n_rows() - folds[v].size(), dev.n_cols());
            std::vector<int> train_y;
            std::size_t ti = 0;
            for (std::size_t i = 0; i < dev.n_rows(); ++i) {
              if (in_fold[i]) continue;
              std::copy_n(&norm_dev[k].values.data[i * dev.n_cols()], dev.n_cols(),
                          &train_x.data[ti * dev.n_cols()]);
              train_y.push_back(dev_labels[i]);
              ++ti;
            }
            const LogRegModel model = train_logreg(train_x, train_y, max_iter);
            probs[v][k] = predict_proba(model, norm_hold[k].values);
            CellResult& cell = cell_at(v, k);
            if (cell.error.empty()) {
              cell.has_downstream = true;
              cell.downstream = classification_metrics(probs[v][k], hold_labels);
              cell.max_iter = max_iter;
            }
          }
        } catch (const std::exception& e) {
          for (std::size_t v = 0; v < n_folds; ++v) {
            CellResult& cell = cell_at(v, k);
            if (cell.error.empty()) cell.error = std::string("downstream: ") + e.what();
          }
        }
      }

      for (std::size_t v = 0; v < n_folds; ++v) {
        std::vector<std::vector<double>> complete;
        for (std::size_t k = 0; k < cfg.repeats; ++k) {
          if (!probs[v][k].empty()) complete.push_back(probs[v][k]);
        }
        if (complete.empty()) continue;
        const std::vector<double> pooled_probs = cfg.pool_by_vote
                                                     ? pool_predictions_vote(complete)
                                                     : pool_predictions(complete);
        PooledResult pr;
        pr.key = CellKey{unit.holdout, v, unit.imputer, 0, unit.train_rate, unit.test_rate};
        pr.metrics = classification_metrics(pooled_probs, hold_labels);
        out.pooled.push_back(std::move(pr));
      }
    } else {
      for (auto& [key, cell] : out.cells) {
        if (!cell.skip_reason.empty()) cell.skip_reason += "; ";
        cell.skip_reason += "no labels: downstream metrics skipped";
      }
    }
  } catch (const std::exception& e) {
    fail_all(e.what());
  }
  return out;
}

}  // namespace

QualityReport run_benchmark(const RunConfig& cfg) {
  cfg.validate();

  Dataset data;
  if (cfg.source == "synth") {
    SynthConfig scfg;
    scfg.n_samples = cfg.synth_n;
    scfg.n_features = cfg.synth_d;
    scfg.class_sep = cfg.synth_sep;
    scfg.seed = derive_seed(cfg.master_seed, "synth");
    data = generate_classification(scfg);
  } else {
    data = load_dataset(cfg.csv_path, cfg.csv_schema, cfg.csv_label);
  }

  bool natural = false;
  for (double v : data.values.data) {
    if (is_missing(v)) {
      natural = true;
      break;
    }
  }

  const SplitPlan plan = make_split_plan(data.n_rows(), derive_seed(cfg.master_seed, "split"));
  const std::size_t sliced_m =
      cfg.sliced_m > 0 ? cfg.sliced_m : std::max<std::size_t>(data.n_cols(), 50);

  std::vector<Unit> units;
  const std::vector<double> nan_rate{missing_value()};
  const auto& train_rates = natural ? nan_rate : cfg.train_rates;
  const auto& test_rates = natural ? nan_rate : cfg.test_rates;
  for (std::size_t h = 0; h < plan.holdouts.size(); ++h) {
    for (double tr : train_rates) {
      for (double te : test_rates) {
        for (const auto& imp : cfg.imputers) {
          units.push_back({h, tr, te, imp});
        }
      }
    }
  }

  BenchmarkContext ctx{cfg, data, plan, natural, sliced_m};
  std::vector<UnitOutcome> outcomes(units.size());
  parallel_for(units.size(), [&](std::size_t i) { outcomes[i] = run_unit(ctx, units[i]); });

  QualityReport report;
  report.config = cfg;
  for (auto& outcome : outcomes) {
    for (auto& cell : outcome.cells) report.cells.push_back(std::move(cell));
    for (auto& p : outcome.pooled) report.pooled.push_back(std::move(p));
    for (auto& r : outcome.sliced_raw) report.sliced_raw.push_back(std::move(r));
  }
  std::sort(report.cells.begin(), report.cells.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::sort(report.pooled.begin(), report.pooled.end(),
            [](const auto& a, const auto& b) { return a.key < b.key; });
  const auto finite_rate = [](double r) { return std::isnan(r) ? -1.0 : r; };
  std::sort(report.sliced_raw.begin(), report.sliced_raw.end(), [&](const auto& a, const auto& b) {
    return std::tuple(a.key.holdout, a.key.imputer, a.key.repeat, finite_rate(a.key.train_rate),
                      finite_rate(a.key.test_rate), a.r, a.p) <
           std::tuple(b.key.holdout, b.key.imputer, b.key.repeat, finite_rate(b.key.train_rate),
                      finite_rate(b.key.test_rate), b.r, b.p);
  });

  // Outlier proportions aggregate the per-feature distances across repeats,
  // one entry per (holdout, imputer, rates) unit.
  for (std::size_t i = 0; i < units.size(); ++i) {
    if (outcomes[i].outlier_w2.empty()) continue;
    OutlierEntry entry;
    entry.key = CellKey{units[i].holdout, 0, units[i].imputer, 0, units[i].train_rate,
                        units[i].test_rate};
    entry.proportions = outlier_proportions(outcomes[i].outlier_w2, cfg.outlier_thresholds);
    report.outliers.push_back(std::move(entry));
  }
  std::sort(report.outliers.begin(), report.outliers.end(),
            [](const auto& a, const auto& b) { return a.key < b.key; });

  report.quality_vs_auc = correlate_quality_vs_auc(report);
  report.metric_matrix = correlate_metrics(report);
  return report;
}

}  // namespace imputeval
