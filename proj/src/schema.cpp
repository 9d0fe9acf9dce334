#include "imputeval/schema.hpp"

#include <fstream>
#include <set>
#include <stdexcept>

#include <json.hpp>

namespace imputeval {

std::string to_string(FeatureKind k) {
  switch (k) {
    case FeatureKind::Numeric: return "numeric";
    case FeatureKind::Binary: return "binary";
    case FeatureKind::Ordinal: return "ordinal";
    case FeatureKind::Categorical: return "categorical";
  }
  return "numeric";
}

FeatureKind feature_kind_from_string(const std::string& s) {
  if (s == "numeric") return FeatureKind::Numeric;
  if (s == "binary") return FeatureKind::Binary;
  if (s == "ordinal") return FeatureKind::Ordinal;
  if (s == "categorical") return FeatureKind::Categorical;
  throw std::invalid_argument("unknown feature kind: " + s);
}

void FeatureSchema::validate() const {
  std::set<std::string> seen;
  for (const auto& f : entries) {
    if (f.name.empty()) throw std::invalid_argument("schema: empty feature name");
    if (!seen.insert(f.name).second) {
      throw std::invalid_argument("schema: duplicate feature name: " + f.name);
    }
    if (f.kind == FeatureKind::Categorical && f.levels.size() < 2) {
      throw std::invalid_argument("schema: categorical feature needs >= 2 levels: " + f.name);
    }
  }
}

std::pair<std::size_t, std::size_t> EncodedSchema::group_span(std::size_t group) const {
  std::size_t first = columns.size();
  std::size_t last = 0;
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (columns[c].group == group) {
      first = std::min(first, c);
      last = c + 1;
    }
  }
  if (first >= last) throw std::out_of_range("group_span: no columns for group");
  return {first, last};
}

EncodedSchema encode_schema(const FeatureSchema& schema) {
  schema.validate();
  EncodedSchema enc;
  enc.original = schema;
  for (std::size_t g = 0; g < schema.entries.size(); ++g) {
    const auto& f = schema.entries[g];
    if (f.kind == FeatureKind::Categorical) {
      for (std::size_t l = 0; l < f.levels.size(); ++l) {
        enc.columns.push_back({f.name + "=" + f.levels[l], f.kind, g, l});
      }
    } else {
      enc.columns.push_back({f.name, f.kind, g, 0});
    }
  }
  return enc;
}

FeatureSchema load_schema(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open schema file: " + path);
  nlohmann::json j;
  in >> j;
  if (!j.is_array()) throw std::invalid_argument("schema file must be a JSON array: " + path);
  FeatureSchema schema;
  for (const auto& item : j) {
    FeatureSpec f;
    f.name = item.at("name").get<std::string>();
    f.kind = feature_kind_from_string(item.at("kind").get<std::string>());
    if (item.contains("levels")) {
      for (const auto& lv : item.at("levels")) f.levels.push_back(lv.get<std::string>());
    }
    schema.entries.push_back(std::move(f));
  }
  schema.validate();
  return schema;
}

void save_schema(const FeatureSchema& schema, const std::string& path) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& f : schema.entries) {
    nlohmann::json item;
    item["name"] = f.name;
    item["kind"] = to_string(f.kind);
    if (!f.levels.empty()) item["levels"] = f.levels;
    j.push_back(item);
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write schema file: " + path);
  out << j.dump(2) << "\n";
}

}  // namespace imputeval
