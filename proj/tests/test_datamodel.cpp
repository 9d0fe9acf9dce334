#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>

#include "imputeval/dataset.hpp"
#include "imputeval/rng.hpp"

using namespace imputeval;

namespace {

FeatureSchema numeric_schema(std::initializer_list<const char*> names) {
  FeatureSchema s;
  for (const char* n : names) s.entries.push_back({n, FeatureKind::Numeric, {}});
  return s;
}

Dataset make_numeric(std::initializer_list<const char*> names,
                     const std::vector<std::vector<double>>& rows) {
  Dataset ds;
  ds.schema = encode_schema(numeric_schema(names));
  ds.values = Matrix(rows.size(), ds.schema.n_columns());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) ds.values.at(i, j) = rows[i][j];
  }
  return ds;
}

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name, const std::string& content)
      : path("/tmp/imputeval_test_" + name) {
    std::ofstream f(path);
    f << content;
  }
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("load_dataset parses a small CSV with a missing cell") {
  TempFile data("dm1.csv", "a,b\n1,2\n,4\n5,6\n");
  TempFile schema("dm1.json",
                  R"([{"name":"a","kind":"numeric"},{"name":"b","kind":"numeric"}])");
  const Dataset ds = load_dataset(data.path, schema.path);
  CHECK(ds.n_rows() == 3);
  CHECK(ds.n_cols() == 2);
  std::size_t missing = 0;
  for (double v : ds.values.data) {
    if (is_missing(v)) ++missing;
  }
  CHECK(missing == 1);
  CHECK(is_missing(ds.values.at(1, 0)));
  CHECK(ds.values.at(2, 1) == 6.0);
}

TEST_CASE("categorical value B encodes as (0,1,0) within its group") {
  TempFile data("dm2.csv", "x,c\n1.5,B\n");
  TempFile schema("dm2.json",
                  R"([{"name":"x","kind":"numeric"},
                      {"name":"c","kind":"categorical","levels":["A","B","C"]}])");
  const Dataset ds = load_dataset(data.path, schema.path);
  CHECK(ds.n_cols() == 4);
  CHECK(ds.values.at(0, 1) == 0.0);
  CHECK(ds.values.at(0, 2) == 1.0);
  CHECK(ds.values.at(0, 3) == 0.0);
  CHECK(ds.schema.columns[1].group == 1);
  CHECK(ds.schema.columns[2].group == 1);
  CHECK(ds.schema.columns[3].group == 1);
  CHECK(decode_categorical(ds, 0, 1) == "B");
}

TEST_CASE("CSV column absent from schema is a schema mismatch") {
  TempFile data("dm3.csv", "a,b\n1,2\n");
  TempFile schema("dm3.json", R"([{"name":"a","kind":"numeric"}])");
  CHECK_THROWS_WITH_AS(load_dataset(data.path, schema.path),
                       doctest::Contains("schema mismatch"), std::invalid_argument);
}

TEST_CASE("schema column absent from CSV is also a schema mismatch") {
  TempFile data("dm4.csv", "a\n1\n");
  TempFile schema("dm4.json",
                  R"([{"name":"a","kind":"numeric"},{"name":"b","kind":"numeric"}])");
  CHECK_THROWS_WITH_AS(load_dataset(data.path, schema.path),
                       doctest::Contains("schema mismatch"), std::invalid_argument);
}

TEST_CASE("unknown categorical level and non-numeric cells are rejected") {
  TempFile schema("dm5.json",
                  R"([{"name":"x","kind":"numeric"},
                      {"name":"c","kind":"categorical","levels":["A","B"]}])");
  TempFile bad_level("dm5a.csv", "x,c\n1,Z\n");
  CHECK_THROWS_WITH_AS(load_dataset(bad_level.path, schema.path),
                       doctest::Contains("unknown categorical level"), std::invalid_argument);
  TempFile bad_cell("dm5b.csv", "x,c\nfoo,A\n");
  CHECK_THROWS_WITH_AS(load_dataset(bad_cell.path, schema.path),
                       doctest::Contains("non-numeric"), std::invalid_argument);
}

TEST_CASE("label column is extracted and excluded from the matrix") {
  TempFile data("dm6.csv", "a,y\n1,0\n2,1\n");
  TempFile schema("dm6.json", R"([{"name":"a","kind":"numeric"}])");
  const Dataset ds = load_dataset(data.path, schema.path, "y");
  CHECK(ds.n_cols() == 1);
  REQUIRE(ds.labels.has_value());
  CHECK(*ds.labels == std::vector<int>{0, 1});
}

TEST_CASE("fit_normalizer uses population sd over observed cells") {
  const Dataset ds = make_numeric({"a"}, {{1.0}, {2.0}, {3.0}});
  const Normalizer nz = fit_normalizer(ds, {0, 1, 2});
  CHECK(nz.means[0] == doctest::Approx(2.0));
  CHECK(nz.sds[0] == doctest::Approx(std::sqrt(2.0 / 3.0)));
  CHECK(nz.zero_sd_flag[0] == 0);
}

TEST_CASE("constant column gets sd 1 and a flag") {
  const Dataset ds = make_numeric({"a"}, {{5.0}, {5.0}});
  const Normalizer nz = fit_normalizer(ds, {0, 1});
  CHECK(nz.means[0] == doctest::Approx(5.0));
  CHECK(nz.sds[0] == 1.0);
  CHECK(nz.zero_sd_flag[0] == 1);
}

TEST_CASE("missing cells are excluded from normalizer statistics") {
  Dataset ds = make_numeric({"a"}, {{1.0}, {2.0}, {3.0}, {0.0}});
  ds.values.at(3, 0) = missing_value();
  const Normalizer nz = fit_normalizer(ds, {0, 1, 2, 3});
  CHECK(nz.means[0] == doctest::Approx(2.0));
}

TEST_CASE("fully missing column in the fit rows names the column") {
  Dataset ds = make_numeric({"a", "bcol"}, {{1.0, 0.0}, {2.0, 0.0}});
  ds.values.at(0, 1) = missing_value();
  ds.values.at(1, 1) = missing_value();
  CHECK_THROWS_WITH_AS(fit_normalizer(ds, {0, 1}), doctest::Contains("bcol"),
                       std::invalid_argument);
}

TEST_CASE("apply_normalizer maps cell 4 with mean 2 sd 2 to 1.0") {
  Dataset ds = make_numeric({"a"}, {{4.0}});
  Normalizer nz;
  nz.means = {2.0};
  nz.sds = {2.0};
  nz.zero_sd_flag = {0};
  const Dataset out = apply_normalizer(ds, nz);
  CHECK(out.values.at(0, 0) == doctest::Approx(1.0));
}

TEST_CASE("normalize round trip restores observed cells within 1e-12") {
  Rng rng(99);
  Dataset ds = make_numeric({"a", "b", "c"}, {});
  ds.values = Matrix(40, 3);
  for (double& v : ds.values.data) v = 10.0 * rng.normal() + 3.0;
  ds.values.at(5, 1) = missing_value();
  const Normalizer nz = fit_normalizer(ds, {0, 1, 2, 3, 4, 5, 6, 7, 8, 9});
  const Dataset back = invert_normalizer(apply_normalizer(ds, nz), nz);
  for (std::size_t i = 0; i < ds.n_rows(); ++i) {
    for (std::size_t j = 0; j < ds.n_cols(); ++j) {
      if (is_missing(ds.values.at(i, j))) {
        CHECK(is_missing(back.values.at(i, j)));
      } else {
        CHECK(back.values.at(i, j) == doctest::Approx(ds.values.at(i, j)).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("shape mismatch in apply_normalizer throws") {
  const Dataset ds = make_numeric({"a", "b"}, {{1.0, 2.0}});
  Normalizer nz;
  nz.means = {0.0};
  nz.sds = {1.0};
  nz.zero_sd_flag = {0};
  CHECK_THROWS_AS(apply_normalizer(ds, nz), std::invalid_argument);
}

namespace {

Dataset mixed_dataset() {
  FeatureSchema s;
  s.entries.push_back({"g", FeatureKind::Categorical, {"A", "B", "C"}});
  s.entries.push_back({"b", FeatureKind::Binary, {}});
  s.entries.push_back({"o", FeatureKind::Ordinal, {"0", "1", "2", "3"}});
  s.entries.push_back({"x", FeatureKind::Numeric, {}});
  Dataset ds;
  ds.schema = encode_schema(s);
  ds.values = Matrix(1, ds.schema.n_columns());
  return ds;
}

}  // namespace

TEST_CASE("postprocess rounds groups, binaries and ordinals") {
  Dataset ds = mixed_dataset();
  ds.values.at(0, 0) = 0.2;  // group g
  ds.values.at(0, 1) = 0.7;
  ds.values.at(0, 2) = 0.1;
  ds.values.at(0, 3) = 0.5;  // binary tie -> 0
  ds.values.at(0, 4) = 2.6;  // ordinal -> 3
  ds.values.at(0, 5) = 1.234;

  const Dataset out = postprocess_imputed(ds);
  CHECK(out.values.at(0, 0) == 0.0);
  CHECK(out.values.at(0, 1) == 1.0);
  CHECK(out.values.at(0, 2) == 0.0);
  CHECK(out.values.at(0, 3) == 0.0);
  CHECK(out.values.at(0, 4) == 3.0);
  CHECK(out.values.at(0, 5) == 1.234);
}

TEST_CASE("postprocess one-hot ties pick the lowest index and ordinals clamp") {
  Dataset ds = mixed_dataset();
  ds.values.at(0, 0) = 0.4;
  ds.values.at(0, 1) = 0.4;
  ds.values.at(0, 2) = 0.1;
  ds.values.at(0, 3) = 0.8;
  ds.values.at(0, 4) = 9.7;  // clamps to last level
  ds.values.at(0, 5) = -2.0;

  const Dataset out = postprocess_imputed(ds);
  CHECK(out.values.at(0, 0) == 1.0);
  CHECK(out.values.at(0, 1) == 0.0);
  CHECK(out.values.at(0, 3) == 1.0);
  CHECK(out.values.at(0, 4) == 3.0);
}

TEST_CASE("postprocess is idempotent and one-hot groups sum to exactly 1") {
  Rng rng(5);
  Dataset ds = mixed_dataset();
  ds.values = Matrix(50, ds.schema.n_columns());
  for (double& v : ds.values.data) v = 4.0 * rng.uniform() - 1.0;
  const Dataset once = postprocess_imputed(ds);
  const Dataset twice = postprocess_imputed(once);
  CHECK(once.values.data == twice.values.data);
  const auto [first, last] = ds.schema.group_span(0);
  for (std::size_t i = 0; i < once.n_rows(); ++i) {
    double sum = 0.0;
    for (std::size_t c = first; c < last; ++c) sum += once.values.at(i, c);
    CHECK(sum == 1.0);
  }
}

TEST_CASE("postprocess requires complete data") {
  Dataset ds = mixed_dataset();
  ds.values.at(0, 5) = missing_value();
  CHECK_THROWS_AS(postprocess_imputed(ds), std::invalid_argument);
}

TEST_CASE("categorical encode then decode is the identity on level names") {
  TempFile schema("dm7.json",
                  R"([{"name":"c","kind":"categorical","levels":["lo","mid","hi"]}])");
  TempFile data("dm7.csv", "c\nlo\nhi\nmid\nlo\n");
  const Dataset ds = load_dataset(data.path, schema.path);
  const std::vector<std::string> expected{"lo", "hi", "mid", "lo"};
  for (std::size_t i = 0; i < expected.size(); ++i) {
    CHECK(decode_categorical(ds, i, 0) == expected[i]);
  }
}

TEST_CASE("dataset CSV round trip preserves values and missingness") {
  Rng rng(17);
  Dataset ds = make_numeric({"a", "b"}, {});
  ds.values = Matrix(20, 2);
  for (double& v : ds.values.data) v = rng.normal() * 1e3;
  ds.values.at(3, 1) = missing_value();
  const std::string path = "/tmp/imputeval_test_roundtrip.csv";
  save_dataset_csv(ds, path);
  const Matrix back = load_matrix_csv(path, ds.schema);
  REQUIRE(back.rows == ds.n_rows());
  for (std::size_t i = 0; i < back.rows; ++i) {
    for (std::size_t j = 0; j < back.cols; ++j) {
      if (is_missing(ds.values.at(i, j))) {
        CHECK(is_missing(back.at(i, j)));
      } else {
        CHECK(back.at(i, j) == ds.values.at(i, j));
      }
    }
  }
  std::remove(path.c_str());
}

TEST_CASE("mask CSV round trip") {
  const Dataset ds = make_numeric({"a", "b"}, {{1, 2}, {3, 4}, {5, 6}});
  Mask mask(3, 2);
  mask.set(0, 1, true);
  mask.set(2, 0, true);
  const std::string path = "/tmp/imputeval_test_mask.csv";
  save_mask_csv(mask, ds.schema, path);
  const Mask back = load_mask_csv(path, ds.schema);
  CHECK(back.missing == mask.missing);
  std::remove(path.c_str());
}
