#include "imputeval/config.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace imputeval {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string strip_comment(const std::string& line) {
  bool in_string = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') in_string = !in_string;
    if (line[i] == '#' && !in_string) return line.substr(0, i);
  }
  return line;
}

TomlValue parse_value(const std::string& raw_in, int line_no) {
  const std::string raw = trim(raw_in);
  if (raw.empty()) throw std::invalid_argument("toml: empty value on line " + std::to_string(line_no));
  TomlValue v;
  if (raw.front() == '"') {
    if (raw.size() < 2 || raw.back() != '"') {
      throw std::invalid_argument("toml: unterminated string on line " + std::to_string(line_no));
    }
    v.is_string = true;
    v.raw = raw.substr(1, raw.size() - 2);
    return v;
  }
  if (raw.front() == '[') {
    if (raw.back() != ']') {
      throw std::invalid_argument("toml: unterminated array on line " + std::to_string(line_no));
    }
    v.is_array = true;
    std::string inner = raw.substr(1, raw.size() - 2);
    std::string elem;
    bool in_string = false;
    for (char c : inner) {
      if (c == '"') in_string = !in_string;
      if (c == ',' && !in_string) {
        const std::string e = trim(elem);
        if (!e.empty()) v.array.push_back(e);
        elem.clear();
      } else {
        elem.push_back(c);
      }
    }
    const std::string e = trim(elem);
    if (!e.empty()) v.array.push_back(e);
    for (auto& s : v.array) {
      if (!s.empty() && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
    }
    return v;
  }
  v.raw = raw;
  return v;
}

}  // namespace

std::string TomlValue::as_string() const { return raw; }

std::int64_t TomlValue::as_int() const {
  char* end = nullptr;
  const long long r = std::strtoll(raw.c_str(), &end, 10);
  if (end == raw.c_str() || *end != '\0') {
    throw std::invalid_argument("toml: expected integer, got '" + raw + "'");
  }
  return r;
}

double TomlValue::as_double() const {
  char* end = nullptr;
  const double r = std::strtod(raw.c_str(), &end);
  if (end == raw.c_str() || *end != '\0') {
    throw std::invalid_argument("toml: expected number, got '" + raw + "'");
  }
  return r;
}

bool TomlValue::as_bool() const {
  if (raw == "true") return true;
  if (raw == "false") return false;
  throw std::invalid_argument("toml: expected boolean, got '" + raw + "'");
}

std::map<std::string, TomlValue> parse_toml(const std::string& text) {
  std::map<std::string, TomlValue> out;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(strip_comment(line));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw std::invalid_argument("toml: bad section header on line " + std::to_string(line_no));
      }
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("toml: expected key = value on line " + std::to_string(line_no));
    }
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw std::invalid_argument("toml: empty key on line " + std::to_string(line_no));
    const std::string full = section.empty() ? key : section + "." + key;
    out[full] = parse_value(line.substr(eq + 1), line_no);
  }
  return out;
}

void RunConfig::validate() const {
  if (source != "synth" && source != "csv") {
    throw std::invalid_argument("config: data.source must be \"synth\" or \"csv\"");
  }
  if (source == "csv" && (csv_path.empty() || csv_schema.empty())) {
    throw std::invalid_argument("config: csv source needs data.path and data.schema");
  }
  if (!master_seed_set) throw std::invalid_argument("config: run.master_seed is required");
  if (repeats < 1) throw std::invalid_argument("config: imputers.repeats >= 1 required");
  for (double r : train_rates) {
    if (r < 0.0 || r > 1.0) throw std::invalid_argument("config: train rate out of [0,1]");
  }
  for (double r : test_rates) {
    if (r < 0.0 || r > 1.0) throw std::invalid_argument("config: test rate out of [0,1]");
  }
  if (imputers.empty()) throw std::invalid_argument("config: at least one imputer required");
  for (const auto& m : imputers) impute_method_from_string(m);  // throws on unknown
  if (max_iter_candidates.empty()) {
    throw std::invalid_argument("config: classifier.max_iter_candidates must be non-empty");
  }
  if (bins < 2) throw std::invalid_argument("config: sliced.bins >= 2 required");
  if (sliced_p < 1) throw std::invalid_argument("config: sliced.p >= 1 required");
}

namespace {

TomlValue scalar_value(const std::string& raw) {
  TomlValue v;
  v.raw = raw;
  return v;
}

}  // namespace

RunConfig parse_run_config(const std::string& text) {
  const auto kv = parse_toml(text);
  RunConfig cfg;
  const auto get = [&](const std::string& key) -> const TomlValue* {
    const auto it = kv.find(key);
    return it == kv.end() ? nullptr : &it->second;
  };
  for (const auto& [key, value] : kv) {
    (void)value;
    static const std::vector<std::string> known = {
        "data.source", "data.n", "data.d", "data.class_sep", "data.path", "data.schema",
        "data.label", "missingness.train_rates", "missingness.test_rates", "imputers.methods",
        "imputers.repeats", "imputers.mice_iterations", "imputers.mice_donors",
        "imputers.mice_ridge", "imputers.external_prefix", "sliced.m", "sliced.p", "sliced.bins",
        "sliced.kl_eps", "classifier.max_iter_candidates", "classifier.pool_by_vote",
        "run.master_seed", "run.out_dir", "run.outlier_thresholds"};
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw std::invalid_argument("config: unknown key '" + key + "'");
    }
  }
  if (const auto* v = get("data.source")) cfg.source = v->as_string();
  if (const auto* v = get("data.n")) cfg.synth_n = static_cast<std::size_t>(v->as_int());
  if (const auto* v = get("data.d")) cfg.synth_d = static_cast<std::size_t>(v->as_int());
  if (const auto* v = get("data.class_sep")) cfg.synth_sep = v->as_double();
  if (const auto* v = get("data.path")) cfg.csv_path = v->as_string();
  if (const auto* v = get("data.schema")) cfg.csv_schema = v->as_string();
  if (const auto* v = get("data.label")) cfg.csv_label = v->as_string();
  const auto rates = [](const TomlValue& v) {
    std::vector<double> out;
    for (const auto& e : v.array) out.push_back(scalar_value(e).as_double());
    return out;
  };
  if (const auto* v = get("missingness.train_rates")) cfg.train_rates = rates(*v);
  if (const auto* v = get("missingness.test_rates")) cfg.test_rates = rates(*v);
  if (const auto* v = get("imputers.methods")) {
    cfg.imputers.clear();
    for (const auto& e : v->array) cfg.imputers.push_back(e);
  }
  if (const auto* v = get("imputers.repeats")) cfg.repeats = static_cast<std::size_t>(v->as_int());
  if (const auto* v = get("imputers.mice_iterations")) {
    cfg.mice.iterations = static_cast<std::size_t>(v->as_int());
  }
  if (const auto* v = get("imputers.mice_donors")) {
    cfg.mice.donors = static_cast<std::size_t>(v->as_int());
  }
  if (const auto* v = get("imputers.mice_ridge")) cfg.mice.ridge = v->as_double();
  if (const auto* v = get("imputers.external_prefix")) cfg.external_prefix = v->as_string();
  if (const auto* v = get("sliced.m")) cfg.sliced_m = static_cast<std::size_t>(v->as_int());
  if (const auto* v = get("sliced.p")) cfg.sliced_p = static_cast<std::size_t>(v->as_int());
  if (const auto* v = get("sliced.bins")) cfg.bins = static_cast<std::size_t>(v->as_int());
  if (const auto* v = get("sliced.kl_eps")) cfg.kl_eps = v->as_double();
  if (const auto* v = get("classifier.max_iter_candidates")) {
    cfg.max_iter_candidates.clear();
    for (const auto& e : v->array) {
      cfg.max_iter_candidates.push_back(static_cast<std::size_t>(scalar_value(e).as_int()));
    }
  }
  if (const auto* v = get("classifier.pool_by_vote")) cfg.pool_by_vote = v->as_bool();
  if (const auto* v = get("run.master_seed")) {
    cfg.master_seed = static_cast<std::uint64_t>(v->as_int());
    cfg.master_seed_set = true;
  }
  if (const auto* v = get("run.out_dir")) cfg.out_dir = v->as_string();
  if (const auto* v = get("run.outlier_thresholds")) cfg.outlier_thresholds = rates(*v);
  cfg.validate();
  return cfg;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_run_config(ss.str());
}

}  // namespace imputeval
