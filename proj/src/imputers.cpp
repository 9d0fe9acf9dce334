#include "imputeval/imputers.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "imputeval/rng.hpp"

namespace imputeval {

std::string to_string(ImputeMethod m) {
  switch (m) {
    case ImputeMethod::Mean: return "mean";
    case ImputeMethod::Mice: return "mice";
    case ImputeMethod::External: return "external";
    case ImputeMethod::Identity: return "identity";
  }
  return "mean";
}

ImputeMethod impute_method_from_string(const std::string& s) {
  if (s == "mean") return ImputeMethod::Mean;
  if (s == "mice") return ImputeMethod::Mice;
  if (s == "external") return ImputeMethod::External;
  if (s == "identity") return ImputeMethod::Identity;
  throw std::invalid_argument("unknown imputation method: " + s);
}

namespace {

bool cell_missing(const Dataset& ds, const Mask& mask, std::size_t i, std::size_t j) {
  return mask.at(i, j) || is_missing(ds.values.at(i, j));
}

std::vector<double> observed_column_means(const Dataset& train, const Mask& mask) {
  const std::size_t d = train.n_cols();
  std::vector<double> means(d, 0.0);
  for (std::size_t j = 0; j < d; ++j) {
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < train.n_rows(); ++i) {
      if (cell_missing(train, mask, i, j)) continue;
      sum += train.values.at(i, j);
      ++n;
    }
    if (n == 0) {
      throw std::invalid_argument("impute: training column '" + train.schema.columns[j].name +
                                  "' is fully missing");
    }
    means[j] = sum / static_cast<double>(n);
  }
  return means;
}

void check_shapes(const Dataset& train, const Mask& train_mask, const Dataset& target,
                  const Mask& target_mask) {
  if (train_mask.rows != train.n_rows() || train_mask.cols != train.n_cols()) {
    throw std::invalid_argument("impute: train mask shape mismatch");
  }
  if (target_mask.rows != target.n_rows() || target_mask.cols != target.n_cols()) {
    throw std::invalid_argument("impute: target mask shape mismatch");
  }
  if (train.n_cols() != target.n_cols()) {
    throw std::invalid_argument("impute: train/target column count mismatch");
  }
}

// Solves A x = b for symmetric positive definite A (in-place Cholesky).
// The ridge term keeps the normal equations strictly positive definite.
std::vector<double> solve_spd(std::vector<double> a, std::vector<double> b, std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) {
    double diag = a[j * n + j];
    for (std::size_t k = 0; k < j; ++k) diag -= a[j * n + k] * a[j * n + k];
    if (diag <= 0.0) throw std::runtime_error("solve_spd: matrix not positive definite");
    diag = std::sqrt(diag);
    a[j * n + j] = diag;
    for (std::size_t i = j + 1; i < n; ++i) {
      double v = a[i * n + j];
      for (std::size_t k = 0; k < j; ++k) v -= a[i * n + k] * a[j * n + k];
      a[i * n + j] = v / diag;
    }
  }
  // forward then backward substitution
  for (std::size_t i = 0; i < n; ++i) {
    double v = b[i];
    for (std::size_t k = 0; k < i; ++k) v -= a[i * n + k] * b[k];
    b[i] = v / a[i * n + i];
  }
  for (std::size_t ii = n; ii-- > 0;) {
    double v = b[ii];
    for (std::size_t k = ii + 1; k < n; ++k) v -= a[k * n + ii] * b[k];
    b[ii] = v / a[ii * n + ii];
  }
  return b;
}

}  // namespace

Dataset impute_mean(const Dataset& train, const Mask& train_mask, const Dataset& target,
                    const Mask& target_mask) {
  check_shapes(train, train_mask, target, target_mask);
  const std::vector<double> means = observed_column_means(train, train_mask);
  Dataset out = target;
  for (std::size_t i = 0; i < out.n_rows(); ++i) {
    for (std::size_t j = 0; j < out.n_cols(); ++j) {
      if (cell_missing(target, target_mask, i, j)) out.values.at(i, j) = means[j];
    }
  }
  return out;
}

Dataset impute_mice(const Dataset& train, const Mask& train_mask, const Dataset& target,
                    const Mask& target_mask, const MiceParams& params, std::uint64_t seed) {
  check_shapes(train, train_mask, target, target_mask);
  const std::size_t d = train.n_cols();
  if (d < 2) throw std::invalid_argument("impute_mice: at least 2 columns required");
  if (params.donors < 1) throw std::invalid_argument("impute_mice: donors >= 1 required");
  if (params.iterations < 1) throw std::invalid_argument("impute_mice: iterations >= 1 required");

  const std::size_t n_train = train.n_rows();
  const std::size_t n_target = target.n_rows();
  Rng rng(seed);

  // Observed training values per column double as the initialization pool
  // and the pmm donor support.
  std::vector<std::vector<std::size_t>> obs_rows(d);
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t i = 0; i < n_train; ++i) {
      if (!cell_missing(train, train_mask, i, j)) obs_rows[j].push_back(i);
    }
    if (obs_rows[j].empty()) {
      throw std::invalid_argument("impute_mice: training column '" + train.schema.columns[j].name +
                                  "' is fully missing");
    }
  }

  Matrix work_train = train.values;
  Matrix work_target = target.values;
  std::vector<std::vector<std::size_t>> mis_train(d);
  std::vector<std::vector<std::size_t>> mis_target(d);
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t i = 0; i < n_train; ++i) {
      if (cell_missing(train, train_mask, i, j)) {
        mis_train[j].push_back(i);
        work_train.at(i, j) =
            train.values.at(obs_rows[j][rng.below(obs_rows[j].size())], j);
      }
    }
    for (std::size_t i = 0; i < n_target; ++i) {
      if (cell_missing(target, target_mask, i, j)) {
        mis_target[j].push_back(i);
        work_target.at(i, j) =
            train.values.at(obs_rows[j][rng.below(obs_rows[j].size())], j);
      }
    }
  }

  // Regression design: intercept plus all columns except the response.
  const std::size_t np = d;  // d-1 predictors + intercept
  std::vector<double> xtx(np * np);
  std::vector<double> xty(np);
  std::vector<double> row(np);
  const auto fill_row = [&](const Matrix& m, std::size_t i, std::size_t skip) {
    row[0] = 1.0;
    std::size_t k = 1;
    for (std::size_t j = 0; j < d; ++j) {
      if (j == skip) continue;
      row[k++] = m.at(i, j);
    }
  };

  struct Donor {
    double pred;
    double value;
  };
  std::vector<Donor> donors;

  for (std::size_t sweep = 0; sweep < params.iterations; ++sweep) {
    for (std::size_t j = 0; j < d; ++j) {
      if (mis_train[j].empty() && mis_target[j].empty()) continue;

      std::fill(xtx.begin(), xtx.end(), 0.0);
      std::fill(xty.begin(), xty.end(), 0.0);
      for (std::size_t i : obs_rows[j]) {
        fill_row(work_train, i, j);
        const double y = work_train.at(i, j);
        for (std::size_t a = 0; a < np; ++a) {
          xty[a] += row[a] * y;
          for (std::size_t b = a; b < np; ++b) xtx[a * np + b] += row[a] * row[b];
        }
      }
      for (std::size_t a = 0; a < np; ++a) {
        for (std::size_t b = 0; b < a; ++b) xtx[a * np + b] = xtx[b * np + a];
        if (a > 0) xtx[a * np + a] += params.ridge;  // intercept left unpenalized
        else xtx[a * np + a] += 1e-12;
      }
      const std::vector<double> beta = solve_spd(xtx, xty, np);

      const auto predict = [&](const Matrix& m, std::size_t i) {
        fill_row(m, i, j);
        double v = 0.0;
        for (std::size_t a = 0; a < np; ++a) v += beta[a] * row[a];
        return v;
      };

      donors.clear();
      donors.reserve(obs_rows[j].size());
      for (std::size_t i : obs_rows[j]) {
        donors.push_back({predict(work_train, i), train.values.at(i, j)});
      }
      std::sort(donors.begin(), donors.end(),
                [](const Donor& a, const Donor& b) { return a.pred < b.pred; });
      const std::size_t k = std::min(params.donors, donors.size());

      const auto pmm_draw = [&](double pred) {
        // k donors with predictions nearest to pred: start from the insertion
        // point and widen to whichever side is closer.
        auto it = std::lower_bound(donors.begin(), donors.end(), pred,
                                   [](const Donor& d0, double v) { return d0.pred < v; });
        std::size_t hi = static_cast<std::size_t>(it - donors.begin());
        std::size_t lo = hi;
        for (std::size_t picked = 0; picked < k; ++picked) {
          const bool can_lo = lo > 0;
          const bool can_hi = hi < donors.size();
          if (can_lo && (!can_hi || pred - donors[lo - 1].pred <= donors[hi].pred - pred)) {
            --lo;
          } else {
            ++hi;
          }
        }
        return donors[lo + rng.below(hi - lo)].value;
      };

      for (std::size_t i : mis_train[j]) work_train.at(i, j) = pmm_draw(predict(work_train, i));
      for (std::size_t i : mis_target[j]) work_target.at(i, j) = pmm_draw(predict(work_target, i));
    }
  }

  Dataset out = target;
  out.values = std::move(work_target);
  return out;
}

ImputationSet impute_multiple(const Dataset& train, const Mask& train_mask, const Dataset& target,
                              const Mask& target_mask, const ImputerConfig& cfg) {
  if (cfg.repeats < 1) throw std::invalid_argument("impute_multiple: repeats >= 1 required");
  ImputationSet set;
  for (std::size_t k = 0; k < cfg.repeats; ++k) {
    const std::uint64_t seed =
        derive_seed(cfg.seed, "repeat=" + std::to_string(k));
    Dataset completed;
    switch (cfg.method) {
      case ImputeMethod::Mean:
        completed = impute_mean(train, train_mask, target, target_mask);
        break;
      case ImputeMethod::Mice:
        completed = impute_mice(train, train_mask, target, target_mask, cfg.mice, seed);
        break;
      case ImputeMethod::Identity:
        // Debug bypass: the target must already hold the ground truth.
        for (double v : target.values.data) {
          if (is_missing(v)) {
            throw std::invalid_argument("identity imputer requires complete ground-truth data");
          }
        }
        completed = target;
        break;
      case ImputeMethod::External:
        throw std::invalid_argument("external imputations are loaded, not computed");
    }
    set.completions.push_back(std::move(completed));
    set.provenance.push_back({to_string(cfg.method), seed});
  }
  return set;
}

ImputationSet load_external_imputation(const std::vector<std::string>& paths,
                                       const Dataset& reference, const Mask& mask) {
  if (paths.empty()) throw std::invalid_argument("load_external_imputation: no files");
  if (mask.rows != reference.n_rows() || mask.cols != reference.n_cols()) {
    throw std::invalid_argument("load_external_imputation: mask shape mismatch");
  }
  ImputationSet set;
  for (const auto& path : paths) {
    Matrix m = load_matrix_csv(path, reference.schema);
    if (m.rows != reference.n_rows()) {
      throw std::invalid_argument("shape mismatch: " + path + " has " + std::to_string(m.rows) +
                                  " rows, expected " + std::to_string(reference.n_rows()));
    }
    for (std::size_t i = 0; i < m.rows; ++i) {
      for (std::size_t j = 0; j < m.cols; ++j) {
        if (is_missing(m.at(i, j))) {
          throw std::invalid_argument("remaining missing cell in " + path + " at row " +
                                      std::to_string(i) + ", column " + std::to_string(j));
        }
        if (!cell_missing(reference, mask, i, j) &&
            std::abs(m.at(i, j) - reference.values.at(i, j)) > 1e-9) {
          throw std::invalid_argument("observed-cell mismatch in " + path + " at row " +
                                      std::to_string(i) + ", column " + std::to_string(j));
        }
      }
    }
    Dataset completed = reference;
    completed.values = std::move(m);
    set.completions.push_back(std::move(completed));
    set.provenance.push_back({"external", 0});
  }
  return set;
}

void save_imputation_set(const ImputationSet& set, const std::string& prefix) {
  for (std::size_t k = 0; k < set.completions.size(); ++k) {
    save_dataset_csv(set.completions[k], prefix + ".imp" + std::to_string(k + 1) + ".csv");
  }
}

}  // namespace imputeval
