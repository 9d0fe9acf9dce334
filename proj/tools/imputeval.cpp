#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "imputeval/csv.hpp"
#include "imputeval/jsonout.hpp"
#include "imputeval/missingness.hpp"
#include "imputeval/partition.hpp"
#include "imputeval/pipeline.hpp"
#include "imputeval/rng.hpp"
#include "imputeval/synth.hpp"

using namespace imputeval;

namespace {

int cmd_synth(std::size_t n, std::size_t d, double sep, std::uint64_t seed,
              const std::string& out, const std::string& schema_out,
              const std::string& label_name) {
  SynthConfig cfg{n, d, sep, seed};
  const Dataset ds = generate_classification(cfg);

  std::ofstream f(out);
  if (!f) throw std::runtime_error("cannot write " + out);
  for (const auto& col : ds.schema.columns) f << col.name << ",";
  f << label_name << "\n";
  for (std::size_t i = 0; i < ds.n_rows(); ++i) {
    for (std::size_t j = 0; j < ds.n_cols(); ++j) f << format_double(ds.values.at(i, j)) << ",";
    f << (*ds.labels)[i] << "\n";
  }
  if (!schema_out.empty()) save_schema(ds.schema.original, schema_out);
  std::cerr << "wrote " << ds.n_rows() << "x" << ds.n_cols() << " dataset to " << out << "\n";
  return 0;
}

int cmd_induce(double rate, std::uint64_t seed, bool per_column, const std::string& in_path,
               const std::string& schema_path, const std::string& label_name,
               const std::string& mask_out, const std::string& data_out) {
  const Dataset ds = load_dataset(in_path, schema_path, label_name);
  const Mask mask = induce_mcar(ds, {rate, seed, per_column});
  save_mask_csv(mask, ds.schema, mask_out);
  if (!data_out.empty()) save_dataset_csv(apply_mask(ds, mask), data_out);
  std::cerr << "masked " << mask.count() << " of " << (mask.rows * mask.cols) << " cells\n";
  return 0;
}

int cmd_split(std::size_t n, std::uint64_t seed, const std::string& out) {
  const SplitPlan plan = make_split_plan(n, seed);
  save_split_plan(plan, out);
  std::cerr << "wrote split plan for n=" << n << " to " << out << "\n";
  return 0;
}

int cmd_impute(const std::string& method, std::size_t repeats, std::uint64_t seed,
               const std::string& in_path, const std::string& schema_path,
               const std::string& label_name, const std::string& mask_path,
               const std::string& out_prefix, const MiceParams& mice) {
  const Dataset ds = load_dataset(in_path, schema_path, label_name);
  const Mask mask =
      mask_path.empty() ? mask_from_missing(ds) : load_mask_csv(mask_path, ds.schema);

  ImputerConfig cfg;
  cfg.method = impute_method_from_string(method);
  cfg.mice = mice;
  cfg.repeats = repeats;
  cfg.seed = seed;
  ImputationSet set = impute_multiple(ds, mask, ds, mask, cfg);
  for (auto& c : set.completions) c = postprocess_imputed(c);
  save_imputation_set(set, out_prefix);
  std::cerr << "wrote " << set.completions.size() << " completions to " << out_prefix
            << ".imp<k>.csv\n";
  return 0;
}

int cmd_evaluate(const std::string& truth_path, const std::string& schema_path,
                 const std::string& label_name, const std::string& mask_path,
                 const std::vector<std::string>& imputed, std::size_t m, std::size_t p,
                 std::size_t bins, std::uint64_t seed, const std::string& out_path) {
  const Dataset truth = load_dataset(truth_path, schema_path, label_name);
  const Mask mask = load_mask_csv(mask_path, truth.schema);
  const ImputationSet set = load_external_imputation(imputed, truth, mask);

  std::vector<std::size_t> all_rows(truth.n_rows());
  for (std::size_t i = 0; i < truth.n_rows(); ++i) all_rows[i] = i;
  const Normalizer nz = fit_normalizer(apply_mask(truth, mask), all_rows);
  const Dataset norm_truth = apply_normalizer(truth, nz);

  const std::size_t sliced_m = m > 0 ? m : std::max<std::size_t>(truth.n_cols(), 50);
  const DirectionSet dirs =
      sample_unit_directions(truth.n_cols(), sliced_m, derive_seed(seed, "dirs"));
  const HalfPartitionSet halves =
      make_half_partitions(truth.n_rows(), p, derive_seed(seed, "halves"));

  JVal root = JVal::object();
  JVal per_repeat = JVal::array();
  for (std::size_t k = 0; k < set.completions.size(); ++k) {
    const Dataset norm_imp = apply_normalizer(set.completions[k], nz);
    const SampleStats sample = sample_stats(norm_truth.values, norm_imp.values, mask);
    const FeatureStats feature = feature_stats(norm_truth.values, norm_imp.values, mask, bins);
    const SlicedResult sliced = sliced_distances(norm_truth.values, norm_imp.values, dirs, halves);
    const ClassCStats cstats = class_c_stats(sliced, bins);

    JVal item = JVal::object();
    item.set("repeat", JVal::integer(static_cast<long long>(k)));
    JVal sj = JVal::object();
    sj.set("rmse", JVal::real(sample.rmse));
    sj.set("mae", JVal::real(sample.mae));
    sj.set("r2", JVal::real(sample.r2));
    item.set("sample", std::move(sj));
    JVal fj = JVal::object();
    const auto dist_json = [](const FeatureDistances& d) {
      JVal j = JVal::object();
      j.set("kl", JVal::real(d.kl));
      j.set("ks", JVal::real(d.ks));
      j.set("w2", JVal::real(d.w2));
      return j;
    };
    fj.set("min", dist_json(feature.min));
    fj.set("median", dist_json(feature.median));
    fj.set("max", dist_json(feature.max));
    item.set("feature", std::move(fj));
    JVal cj = JVal::object();
    cj.set("kl", JVal::real(cstats.kl));
    cj.set("ks", JVal::real(cstats.ks));
    cj.set("w2", JVal::real(cstats.w2));
    cj.set("ratio_median", JVal::real(cstats.ratio_median));
    cj.set("ratio_iqr", JVal::real(cstats.ratio_iqr));
    cj.set("guarded", JVal::integer(static_cast<long long>(cstats.guarded)));
    cj.set("skipped", JVal::integer(static_cast<long long>(cstats.skipped)));
    item.set("sliced", std::move(cj));
    per_repeat.push(std::move(item));
  }
  root.set("per_repeat", std::move(per_repeat));
  root.set("masked_cells", JVal::integer(static_cast<long long>(mask.count())));
  root.set("version", JVal::str(kVersion));

  if (out_path.empty()) {
    root.write(std::cout);
    std::cout << "\n";
  } else {
    std::ofstream f(out_path);
    if (!f) throw std::runtime_error("cannot write " + out_path);
    root.write(f);
    f << "\n";
  }
  return 0;
}

int cmd_benchmark(const std::string& config_path, const std::string& out_dir_override) {
  RunConfig cfg = load_run_config(config_path);
  if (!out_dir_override.empty()) cfg.out_dir = out_dir_override;
  const QualityReport report = run_benchmark(cfg);
  emit_report(report, cfg.out_dir);
  std::size_t n_errors = 0;
  for (const auto& [key, cell] : report.cells) {
    if (!cell.error.empty()) ++n_errors;
  }
  std::cerr << "benchmark: " << report.cells.size() << " cells, " << n_errors
            << " errors, report in " << cfg.out_dir << "\n";
  return n_errors == 0 ? 0 : 1;
}

int cmd_correlate(const std::string& report_path, const std::string& out_dir) {
  QualityReport report = load_report(report_path);
  report.quality_vs_auc = correlate_quality_vs_auc(report);
  report.metric_matrix = correlate_metrics(report);
  if (out_dir.empty()) {
    std::cout << "statistic,test_rate,pearson,spearman,n\n";
    for (const auto& e : report.quality_vs_auc) {
      std::cout << e.statistic << ',' << (std::isnan(e.test_rate) ? "" : format_double(e.test_rate))
                << ',' << (std::isnan(e.pearson_r) ? "" : format_double(e.pearson_r)) << ','
                << (std::isnan(e.spearman_r) ? "" : format_double(e.spearman_r)) << ',' << e.n
                << "\n";
    }
  } else {
    emit_report(report, out_dir);
    std::cerr << "wrote refreshed correlations to " << out_dir << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"imputeval: imputation quality and downstream-performance benchmarks"};
  app.require_subcommand(1);

  // synth
  auto* synth = app.add_subcommand("synth", "generate the simulated classification dataset");
  std::size_t n = 1000;
  std::size_t d = 25;
  double sep = 1.0;
  std::uint64_t seed = 0;
  std::string out;
  std::string schema_out;
  std::string synth_label = "label";
  std::string label_name;  // empty = no label column in the file
  synth->add_option("--n", n, "samples");
  synth->add_option("--d", d, "features");
  synth->add_option("--sep", sep, "class separation");
  synth->add_option("--seed", seed, "rng seed");
  synth->add_option("--out", out, "output CSV")->required();
  synth->add_option("--schema-out", schema_out, "output schema JSON");
  synth->add_option("--label-col", synth_label, "label column name");

  // induce
  auto* induce = app.add_subcommand("induce", "induce MCAR missingness, write the mask");
  double rate = 0.25;
  bool per_column = false;
  std::string in_path;
  std::string schema_path;
  std::string mask_out;
  std::string data_out;
  induce->add_option("--rate", rate, "missingness rate in [0,1]")->required();
  induce->add_option("--seed", seed, "rng seed");
  induce->add_flag("--per-column", per_column, "stratify the exact count per column");
  induce->add_option("--in", in_path, "input CSV")->required();
  induce->add_option("--schema", schema_path, "schema JSON")->required();
  induce->add_option("--label-col", label_name, "label column name (excluded from masking)");
  induce->add_option("--mask-out", mask_out, "output mask CSV")->required();
  induce->add_option("--data-out", data_out, "optional masked data CSV");

  // split
  auto* split = app.add_subcommand("split", "write a hierarchical split plan");
  split->add_option("--n", n, "sample count")->required();
  split->add_option("--seed", seed, "rng seed");
  split->add_option("--out", out, "output JSON")->required();

  // impute
  auto* impute = app.add_subcommand("impute", "impute a dataset, one CSV per repeat");
  std::string method = "mice";
  std::size_t repeats = 1;
  std::string mask_path;
  std::string out_prefix;
  MiceParams mice;
  impute->add_option("--method", method, "mean | mice");
  impute->add_option("--repeats", repeats, "number of completions");
  impute->add_option("--seed", seed, "rng seed");
  impute->add_option("--in", in_path, "input CSV")->required();
  impute->add_option("--schema", schema_path, "schema JSON")->required();
  impute->add_option("--label-col", label_name, "label column name");
  impute->add_option("--mask", mask_path, "mask CSV (defaults to the NaN pattern)");
  impute->add_option("--out-prefix", out_prefix, "completion file prefix")->required();
  impute->add_option("--mice-iterations", mice.iterations, "chained-equation sweeps");
  impute->add_option("--mice-donors", mice.donors, "pmm donor pool size");
  impute->add_option("--mice-ridge", mice.ridge, "regression ridge lambda");

  // evaluate
  auto* evaluate = app.add_subcommand("evaluate", "score completions against ground truth");
  std::string truth_path;
  std::vector<std::string> imputed_paths;
  std::size_t sliced_m = 0;
  std::size_t sliced_p = 10;
  std::size_t bins = 50;
  std::string eval_out;
  evaluate->add_option("--truth", truth_path, "complete ground-truth CSV")->required();
  evaluate->add_option("--schema", schema_path, "schema JSON")->required();
  evaluate->add_option("--label-col", label_name, "label column name");
  evaluate->add_option("--mask", mask_path, "mask CSV")->required();
  evaluate->add_option("--imputed", imputed_paths, "completion CSVs")->required();
  evaluate->add_option("--m", sliced_m, "projection count (0 = max(d, 50))");
  evaluate->add_option("--p", sliced_p, "half-partition count");
  evaluate->add_option("--bins", bins, "histogram bins for KL");
  evaluate->add_option("--seed", seed, "rng seed for directions/partitions");
  evaluate->add_option("--out", eval_out, "output JSON (default stdout)");

  // benchmark
  auto* benchmark = app.add_subcommand("benchmark", "run the full grid from a TOML config");
  std::string config_path;
  std::string out_dir;
  benchmark->add_option("--config", config_path, "run config TOML")->required();
  benchmark->add_option("--out-dir", out_dir, "override the config output directory");

  // correlate
  auto* correlate = app.add_subcommand("correlate", "recompute correlations from a report");
  std::string report_path;
  correlate->add_option("--report", report_path, "report.json path")->required();
  correlate->add_option("--out-dir", out_dir, "re-emit the report here (default: stdout table)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (synth->parsed()) return cmd_synth(n, d, sep, seed, out, schema_out, synth_label);
    if (induce->parsed()) {
      return cmd_induce(rate, seed, per_column, in_path, schema_path, label_name, mask_out,
                        data_out);
    }
    if (split->parsed()) return cmd_split(n, seed, out);
    if (impute->parsed()) {
      return cmd_impute(method, repeats, seed, in_path, schema_path, label_name, mask_path,
                        out_prefix, mice);
    }
    if (evaluate->parsed()) {
      return cmd_evaluate(truth_path, schema_path, label_name, mask_path, imputed_paths, sliced_m,
                          sliced_p, bins, seed, eval_out);
    }
    if (benchmark->parsed()) return cmd_benchmark(config_path, out_dir);
    if (correlate->parsed()) return cmd_correlate(report_path, out_dir);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
