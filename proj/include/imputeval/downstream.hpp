#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "imputeval/matrix.hpp"

namespace imputeval {

struct LogRegModel {
  std::vector<double> weights;
  double bias = 0.0;
  std::size_t trained_iterations = 0;
};

struct TrainOptions {
  double l2 = 1e-8;        // tiny weight penalty; makes the optimum unique
  double grad_tol = 1e-8;  // stop when the gradient norm falls below this
};

// Full-batch gradient descent with backtracking line search on the mean
// binary cross-entropy plus 0.5*l2*||w||^2 (bias unpenalized). Deterministic:
// zero initialization, fixed step policy.
LogRegModel train_logreg(const Matrix& x, const std::vector<int>& y, std::size_t max_iter,
                         const TrainOptions& opts = {});

std::vector<double> predict_proba(const LogRegModel& model, const Matrix& x);

// Objective and gradient, exposed for verification against finite differences.
double logreg_loss(const Matrix& x, const std::vector<int>& y, const std::vector<double>& weights,
                   double bias, double l2);
void logreg_gradient(const Matrix& x, const std::vector<int>& y, const std::vector<double>& weights,
                     double bias, double l2, std::vector<double>& grad_w, double& grad_b);

// Mann-Whitney AUC: (concordant pairs + half the ties) / (#pos * #neg).
double auc(std::span<const double> scores, const std::vector<int>& labels);

// NaN marks an undefined value (precision with no predicted positives).
struct EvalMetrics {
  double auc = 0.0;
  double accuracy = 0.0;
  double brier = 0.0;
  double precision = 0.0;
  double sensitivity = 0.0;
  double specificity = 0.0;
};

EvalMetrics classification_metrics(std::span<const double> scores, const std::vector<int>& labels,
                                   double threshold = 0.5);

// Elementwise mean of the per-repeat probability vectors.
std::vector<double> pool_predictions(const std::vector<std::vector<double>>& prob_vectors);

// Majority-vote alternative: fraction of repeats predicting positive.
std::vector<double> pool_predictions_vote(const std::vector<std::vector<double>>& prob_vectors,
                                          double threshold = 0.5);

// Candidate maximizing the mean validation-fold AUC; ties take the smallest.
// Folds hold row indices into `x`; each candidate trains on the complement.
std::size_t select_max_iter(const Matrix& x, const std::vector<int>& y,
                            const std::vector<std::vector<std::size_t>>& folds,
                            const std::vector<std::size_t>& candidates,
                            const TrainOptions& opts = {});

}  // namespace imputeval
