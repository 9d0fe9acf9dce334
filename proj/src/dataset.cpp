#include "imputeval/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include "imputeval/csv.hpp"

namespace imputeval {

namespace {

double parse_cell(const std::string& s, const std::string& column) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') {
    throw std::invalid_argument("non-numeric cell '" + s + "' in column " + column);
  }
  return v;
}

}  // namespace

std::size_t Mask::count() const {
  return static_cast<std::size_t>(std::count(missing.begin(), missing.end(), std::uint8_t{1}));
}

Dataset encode_dataset(const std::vector<std::string>& header,
                       const std::vector<std::vector<std::string>>& rows,
                       const FeatureSchema& schema, const std::string& label_column) {
  schema.validate();

  // Map every schema feature to its CSV column; the label column is pulled
  // out separately and everything else must be covered by the schema.
  std::vector<std::size_t> feature_col(schema.entries.size());
  std::size_t label_col = header.size();
  for (std::size_t g = 0; g < schema.entries.size(); ++g) {
    auto it = std::find(header.begin(), header.end(), schema.entries[g].name);
    if (it == header.end()) {
      throw std::invalid_argument("schema mismatch: column '" + schema.entries[g].name +
                                  "' not present in CSV header");
    }
    feature_col[g] = static_cast<std::size_t>(it - header.begin());
  }
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (!label_column.empty() && header[c] == label_column) {
      label_col = c;
      continue;
    }
    const bool known = std::any_of(schema.entries.begin(), schema.entries.end(),
                                   [&](const FeatureSpec& f) { return f.name == header[c]; });
    if (!known) {
      throw std::invalid_argument("schema mismatch: CSV column '" + header[c] +
                                  "' not described by the schema");
    }
  }
  if (!label_column.empty() && label_col == header.size()) {
    throw std::invalid_argument("label column '" + label_column + "' not present in CSV header");
  }

  Dataset ds;
  ds.schema = encode_schema(schema);
  ds.values = Matrix(rows.size(), ds.schema.n_columns(), 0.0);
  std::vector<int> labels;

  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& row = rows[i];
    if (row.size() != header.size()) {
      throw std::invalid_argument("CSV row " + std::to_string(i + 2) +
                                  " has wrong field count");
    }
    std::size_t out = 0;
    for (std::size_t g = 0; g < schema.entries.size(); ++g) {
      const auto& f = schema.entries[g];
      const std::string& cell = row[feature_col[g]];
      if (f.kind == FeatureKind::Categorical) {
        if (cell.empty()) {
          for (std::size_t l = 0; l < f.levels.size(); ++l) {
            ds.values.at(i, out + l) = missing_value();
          }
        } else {
          auto lv = std::find(f.levels.begin(), f.levels.end(), cell);
          if (lv == f.levels.end()) {
            throw std::invalid_argument("unknown categorical level '" + cell +
                                        "' in column " + f.name);
          }
          for (std::size_t l = 0; l < f.levels.size(); ++l) {
            ds.values.at(i, out + l) =
                (l == static_cast<std::size_t>(lv - f.levels.begin())) ? 1.0 : 0.0;
          }
        }
        out += f.levels.size();
      } else if (f.kind == FeatureKind::Ordinal && !f.levels.empty()) {
        if (cell.empty()) {
          ds.values.at(i, out) = missing_value();
        } else {
          auto lv = std::find(f.levels.begin(), f.levels.end(), cell);
          if (lv == f.levels.end()) {
            throw std::invalid_argument("unknown ordinal level '" + cell + "' in column " + f.name);
          }
          ds.values.at(i, out) = static_cast<double>(lv - f.levels.begin());
        }
        ++out;
      } else {
        ds.values.at(i, out) = cell.empty() ? missing_value() : parse_cell(cell, f.name);
        ++out;
      }
    }
    if (label_col < header.size()) {
      const std::string& cell = row[label_col];
      if (cell.empty()) throw std::invalid_argument("missing label in row " + std::to_string(i + 2));
      const double v = parse_cell(cell, label_column);
      if (v != 0.0 && v != 1.0) {
        throw std::invalid_argument("label must be 0 or 1, got '" + cell + "'");
      }
      labels.push_back(static_cast<int>(v));
    }
  }
  if (label_col < header.size()) ds.labels = std::move(labels);
  return ds;
}

Dataset load_dataset(const std::string& data_path, const std::string& schema_path,
                     const std::string& label_column) {
  const CsvTable t = read_csv(data_path);
  const FeatureSchema schema = load_schema(schema_path);
  return encode_dataset(t.header, t.rows, schema, label_column);
}

void save_dataset_csv(const Dataset& ds, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write CSV file: " + path);
  for (std::size_t c = 0; c < ds.schema.columns.size(); ++c) {
    out << (c ? "," : "") << ds.schema.columns[c].name;
  }
  out << "\n";
  for (std::size_t i = 0; i < ds.n_rows(); ++i) {
    for (std::size_t j = 0; j < ds.n_cols(); ++j) {
      if (j) out << ",";
      const double v = ds.values.at(i, j);
      if (!is_missing(v)) out << format_double(v);
    }
    out << "\n";
  }
}

Matrix load_matrix_csv(const std::string& path, const EncodedSchema& schema) {
  const CsvTable t = read_csv(path);
  if (t.header.size() != schema.n_columns()) {
    throw std::invalid_argument("shape mismatch: " + path + " has " +
                                std::to_string(t.header.size()) + " columns, expected " +
                                std::to_string(schema.n_columns()));
  }
  for (std::size_t c = 0; c < t.header.size(); ++c) {
    if (t.header[c] != schema.columns[c].name) {
      throw std::invalid_argument("header mismatch in " + path + " at column " +
                                  std::to_string(c) + ": '" + t.header[c] + "' vs '" +
                                  schema.columns[c].name + "'");
    }
  }
  Matrix m(t.rows.size(), schema.n_columns());
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    if (t.rows[i].size() != schema.n_columns()) {
      throw std::invalid_argument("CSV row " + std::to_string(i + 2) + " has wrong field count");
    }
    for (std::size_t j = 0; j < schema.n_columns(); ++j) {
      const std::string& cell = t.rows[i][j];
      m.at(i, j) = cell.empty() ? missing_value() : parse_cell(cell, schema.columns[j].name);
    }
  }
  return m;
}

void save_mask_csv(const Mask& mask, const EncodedSchema& schema, const std::string& path) {
  if (mask.cols != schema.n_columns()) throw std::invalid_argument("mask/schema column mismatch");
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write mask file: " + path);
  for (std::size_t c = 0; c < schema.columns.size(); ++c) {
    out << (c ? "," : "") << schema.columns[c].name;
  }
  out << "\n";
  for (std::size_t i = 0; i < mask.rows; ++i) {
    for (std::size_t j = 0; j < mask.cols; ++j) {
      out << (j ? "," : "") << (mask.at(i, j) ? '1' : '0');
    }
    out << "\n";
  }
}

Mask load_mask_csv(const std::string& path, const EncodedSchema& schema) {
  const CsvTable t = read_csv(path);
  if (t.header.size() != schema.n_columns()) {
    throw std::invalid_argument("mask shape mismatch in " + path);
  }
  Mask mask(t.rows.size(), schema.n_columns());
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    for (std::size_t j = 0; j < schema.n_columns(); ++j) {
      const std::string& cell = t.rows[i][j];
      if (cell == "1") {
        mask.set(i, j, true);
      } else if (cell != "0") {
        throw std::invalid_argument("mask cells must be 0 or 1, got '" + cell + "'");
      }
    }
  }
  return mask;
}

Normalizer fit_normalizer(const Dataset& ds, const std::vector<std::size_t>& rows) {
  if (rows.empty()) throw std::invalid_argument("fit_normalizer: empty row set");
  const std::size_t d = ds.n_cols();
  Normalizer nz;
  nz.means.assign(d, 0.0);
  nz.sds.assign(d, 1.0);
  nz.zero_sd_flag.assign(d, 0);
  for (std::size_t j = 0; j < d; ++j) {
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t i : rows) {
      const double v = ds.values.at(i, j);
      if (!is_missing(v)) {
        sum += v;
        ++n;
      }
    }
    if (n == 0) {
      throw std::invalid_argument("fit_normalizer: column '" + ds.schema.columns[j].name +
                                  "' has no observed cells in the given rows");
    }
    const double mean = sum / static_cast<double>(n);
    double ss = 0.0;
    for (std::size_t i : rows) {
      const double v = ds.values.at(i, j);
      if (!is_missing(v)) ss += (v - mean) * (v - mean);
    }
    const double sd = std::sqrt(ss / static_cast<double>(n));  // population sd
    nz.means[j] = mean;
    if (sd > 0.0) {
      nz.sds[j] = sd;
    } else {
      nz.sds[j] = 1.0;
      nz.zero_sd_flag[j] = 1;
    }
  }
  return nz;
}

Dataset apply_normalizer(const Dataset& ds, const Normalizer& nz) {
  if (nz.means.size() != ds.n_cols()) throw std::invalid_argument("apply_normalizer: shape mismatch");
  Dataset out = ds;
  for (std::size_t i = 0; i < out.n_rows(); ++i) {
    for (std::size_t j = 0; j < out.n_cols(); ++j) {
      double& v = out.values.at(i, j);
      if (!is_missing(v)) v = (v - nz.means[j]) / nz.sds[j];
    }
  }
  return out;
}

Dataset invert_normalizer(const Dataset& ds, const Normalizer& nz) {
  if (nz.means.size() != ds.n_cols()) throw std::invalid_argument("invert_normalizer: shape mismatch");
  Dataset out = ds;
  for (std::size_t i = 0; i < out.n_rows(); ++i) {
    for (std::size_t j = 0; j < out.n_cols(); ++j) {
      double& v = out.values.at(i, j);
      if (!is_missing(v)) v = v * nz.sds[j] + nz.means[j];
    }
  }
  return out;
}

Dataset postprocess_imputed(const Dataset& ds) {
  for (double v : ds.values.data) {
    if (is_missing(v)) throw std::invalid_argument("postprocess_imputed: dataset has missing cells");
  }
  Dataset out = ds;
  const auto& schema = ds.schema;
  for (std::size_t g = 0; g < schema.original.entries.size(); ++g) {
    const auto& f = schema.original.entries[g];
    const auto [first, last] = schema.group_span(g);
    if (f.kind == FeatureKind::Categorical) {
      for (std::size_t i = 0; i < out.n_rows(); ++i) {
        std::size_t best = first;
        for (std::size_t c = first + 1; c < last; ++c) {
          if (out.values.at(i, c) > out.values.at(i, best)) best = c;  // ties keep lowest index
        }
        for (std::size_t c = first; c < last; ++c) {
          out.values.at(i, c) = (c == best) ? 1.0 : 0.0;
        }
      }
    } else if (f.kind == FeatureKind::Binary) {
      for (std::size_t i = 0; i < out.n_rows(); ++i) {
        double& v = out.values.at(i, first);
        v = (v > 0.5) ? 1.0 : 0.0;
      }
    } else if (f.kind == FeatureKind::Ordinal) {
      for (std::size_t i = 0; i < out.n_rows(); ++i) {
        double& v = out.values.at(i, first);
        v = std::round(v);
        if (!f.levels.empty()) {
          v = std::clamp(v, 0.0, static_cast<double>(f.levels.size() - 1));
        }
      }
    }
  }
  return out;
}

Dataset apply_mask(const Dataset& ds, const Mask& mask) {
  if (mask.rows != ds.n_rows() || mask.cols != ds.n_cols()) {
    throw std::invalid_argument("apply_mask: shape mismatch");
  }
  Dataset out = ds;
  for (std::size_t i = 0; i < out.n_rows(); ++i) {
    for (std::size_t j = 0; j < out.n_cols(); ++j) {
      if (mask.at(i, j)) out.values.at(i, j) = missing_value();
    }
  }
  return out;
}

Mask mask_from_missing(const Dataset& ds) {
  Mask mask(ds.n_rows(), ds.n_cols());
  for (std::size_t i = 0; i < ds.n_rows(); ++i) {
    for (std::size_t j = 0; j < ds.n_cols(); ++j) {
      if (is_missing(ds.values.at(i, j))) mask.set(i, j, true);
    }
  }
  return mask;
}

std::string decode_categorical(const Dataset& ds, std::size_t i, std::size_t group) {
  const auto& f = ds.schema.original.entries.at(group);
  if (f.kind != FeatureKind::Categorical) {
    throw std::invalid_argument("decode_categorical: feature is not categorical");
  }
  const auto [first, last] = ds.schema.group_span(group);
  std::size_t hot = last;
  for (std::size_t c = first; c < last; ++c) {
    if (ds.values.at(i, c) == 1.0) {
      if (hot != last) throw std::invalid_argument("decode_categorical: group not one-hot");
      hot = c;
    } else if (ds.values.at(i, c) != 0.0) {
      throw std::invalid_argument("decode_categorical: group not one-hot");
    }
  }
  if (hot == last) throw std::invalid_argument("decode_categorical: group not one-hot");
  return f.levels[ds.schema.columns[hot].level];
}

}  // namespace imputeval
