#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace imputeval {

enum class FeatureKind { Numeric, Binary, Ordinal, Categorical };

std::string to_string(FeatureKind k);
FeatureKind feature_kind_from_string(const std::string& s);

// One original (pre-encoding) feature.
struct FeatureSpec {
  std::string name;
  FeatureKind kind = FeatureKind::Numeric;
  std::vector<std::string> levels;  // categorical: required, >= 2; ordinal: optional
};

struct FeatureSchema {
  std::vector<FeatureSpec> entries;

  // Throws std::invalid_argument on duplicate names, categorical features
  // with fewer than two levels, or empty names.
  void validate() const;
};

// One column of the encoded value matrix. Categorical features expand to one
// column per level; every column remembers its originating feature (`group`)
// so one-hot siblings can be post-processed together.
struct EncodedColumn {
  std::string name;        // "feature" or "feature=level"
  FeatureKind kind = FeatureKind::Numeric;
  std::size_t group = 0;   // index into FeatureSchema::entries
  std::size_t level = 0;   // level index within the group (categorical only)
};

struct EncodedSchema {
  FeatureSchema original;
  std::vector<EncodedColumn> columns;

  std::size_t n_columns() const { return columns.size(); }
  // Column range [first, last) occupied by original feature `group`.
  std::pair<std::size_t, std::size_t> group_span(std::size_t group) const;
};

EncodedSchema encode_schema(const FeatureSchema& schema);

// Schema file parsing: JSON array of
//   {"name": str, "kind": "numeric"|"binary"|"ordinal"|"categorical", "levels": [str]?}
FeatureSchema load_schema(const std::string& path);
void save_schema(const FeatureSchema& schema, const std::string& path);

}  // namespace imputeval
