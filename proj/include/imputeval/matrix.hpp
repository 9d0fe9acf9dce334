#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

namespace imputeval {

// Row-major dense matrix of doubles. Missing cells hold NaN.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, double fill = 0.0)
      : rows(r), cols(c), data(r * c, fill) {}

  double& at(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  double at(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

  bool same_shape(const Matrix& o) const {
    return rows == o.rows && cols == o.cols;
  }
};

inline double missing_value() {
  return std::numeric_limits<double>::quiet_NaN();
}

inline bool is_missing(double v) { return std::isnan(v); }

}  // namespace imputeval
