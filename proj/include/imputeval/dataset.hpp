#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "imputeval/matrix.hpp"
#include "imputeval/schema.hpp"

namespace imputeval {

// Encoded dataset: one matrix column per encoded feature, NaN for missing.
// Labels, when present, live outside the value matrix and are never imputed.
struct Dataset {
  Matrix values;
  EncodedSchema schema;
  std::optional<std::vector<int>> labels;

  std::size_t n_rows() const { return values.rows; }
  std::size_t n_cols() const { return values.cols; }
};

// Boolean missingness mask over the encoded matrix. 1 = missing.
struct Mask {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::uint8_t> missing;

  Mask() = default;
  Mask(std::size_t r, std::size_t c) : rows(r), cols(c), missing(r * c, 0) {}

  bool at(std::size_t i, std::size_t j) const { return missing[i * cols + j] != 0; }
  void set(std::size_t i, std::size_t j, bool v) { missing[i * cols + j] = v ? 1 : 0; }
  std::size_t count() const;
};

// Per-column standardization statistics, fitted on development rows only.
struct Normalizer {
  std::vector<double> means;
  std::vector<double> sds;                 // population sd; 0 replaced by 1
  std::vector<std::uint8_t> zero_sd_flag;  // 1 where the raw sd was 0
};

// Loads a CSV (header row, empty cell = missing) against a schema file and
// returns the one-hot encoded dataset. `label_column`, when non-empty, names
// a CSV column that is read as 0/1 labels and excluded from the matrix.
Dataset load_dataset(const std::string& data_path, const std::string& schema_path,
                     const std::string& label_column = "");

// Same, from in-memory parsed rows (used by load_dataset and tests).
Dataset encode_dataset(const std::vector<std::string>& header,
                       const std::vector<std::vector<std::string>>& rows,
                       const FeatureSchema& schema, const std::string& label_column = "");

// Writes the encoded matrix as CSV: encoded header, empty cells for NaN.
void save_dataset_csv(const Dataset& ds, const std::string& path);

// Reads a matrix previously written with save_dataset_csv / the imputation
// exchange format. The header must match the encoded schema exactly.
Matrix load_matrix_csv(const std::string& path, const EncodedSchema& schema);

// Mask wire format: same shape as the encoded matrix, cells 0/1 (1 = missing).
void save_mask_csv(const Mask& mask, const EncodedSchema& schema, const std::string& path);
Mask load_mask_csv(const std::string& path, const EncodedSchema& schema);

Normalizer fit_normalizer(const Dataset& ds, const std::vector<std::size_t>& rows);
Dataset apply_normalizer(const Dataset& ds, const Normalizer& nz);
Dataset invert_normalizer(const Dataset& ds, const Normalizer& nz);

// Rounds a complete imputed dataset back onto the feature domains: one-hot
// groups to a single argmax 1 (lowest index on ties), binary columns
// thresholded at 0.5 (ties -> 0), ordinal columns to the nearest valid level.
Dataset postprocess_imputed(const Dataset& ds);

// Copy of `ds` with NaN written at every cell the mask marks missing.
Dataset apply_mask(const Dataset& ds, const Mask& mask);

// Mask derived from the NaN pattern of `ds` (natural missingness).
Mask mask_from_missing(const Dataset& ds);

// Level name encoded by row `i` of the one-hot group `group`; requires the
// group to be exactly one-hot.
std::string decode_categorical(const Dataset& ds, std::size_t i, std::size_t group);

}  // namespace imputeval
