#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "imputeval/imputers.hpp"

namespace imputeval {

// Benchmark configuration, mirrored by the TOML config file.
struct RunConfig {
  // data source: "synth" or "csv"
  std::string source = "synth";
  std::size_t synth_n = 1000;
  std::size_t synth_d = 25;
  double synth_sep = 1.0;
  std::string csv_path;
  std::string csv_schema;
  std::string csv_label;

  std::vector<double> train_rates{0.25, 0.5};
  std::vector<double> test_rates{0.25, 0.5};

  std::vector<std::string> imputers{"mean", "mice"};
  std::size_t repeats = 5;
  MiceParams mice;
  std::string external_prefix;  // completions named <prefix>.h<h>.r<tr>-<te>.imp<k>.csv

  std::size_t sliced_m = 0;  // 0 -> max(d, 50)
  std::size_t sliced_p = 10;
  std::size_t bins = 50;
  double kl_eps = 1e-10;

  std::vector<std::size_t> max_iter_candidates{50, 100, 150, 200, 250};
  bool pool_by_vote = false;

  std::vector<double> outlier_thresholds{1.5e-8, 1e-7};

  std::uint64_t master_seed = 0;
  bool master_seed_set = false;
  std::string out_dir = "out";

  void validate() const;
};

RunConfig load_run_config(const std::string& path);
RunConfig parse_run_config(const std::string& text);

// Minimal TOML subset: [section] headers, key = value lines with string,
// integer, float, boolean and flat-array values, and # comments. Enough to
// mirror RunConfig; nested tables and multi-line values are not supported.
struct TomlValue {
  std::string raw;
  bool is_string = false;
  std::vector<std::string> array;  // raw elements, empty when scalar
  bool is_array = false;

  std::string as_string() const;
  std::int64_t as_int() const;
  double as_double() const;
  bool as_bool() const;
};

std::map<std::string, TomlValue> parse_toml(const std::string& text);

}  // namespace imputeval
