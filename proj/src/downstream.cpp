#include "imputeval/downstream.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>

namespace imputeval {

namespace {

double sigmoid(double z) {
  if (z >= 0.0) {
    return 1.0 / (1.0 + std::exp(-z));
  }
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// log(1 + exp(t)) without overflow
double softplus(double t) { return t > 30.0 ? t : std::log1p(std::exp(t)); }

void check_binary(const std::vector<int>& y) {
  bool has0 = false;
  bool has1 = false;
  for (int v : y) {
    if (v == 0) has0 = true;
    else if (v == 1) has1 = true;
    else throw std::invalid_argument("labels must be 0 or 1");
  }
  if (!has0 || !has1) throw std::invalid_argument("single-class labels");
}

std::vector<double> scores_of(const Matrix& x, const std::vector<double>& w, double b) {
  std::vector<double> z(x.rows);
  for (std::size_t i = 0; i < x.rows; ++i) {
    double s = b;
    const double* row = &x.data[i * x.cols];
    for (std::size_t j = 0; j < x.cols; ++j) s += row[j] * w[j];
    z[i] = s;
  }
  return z;
}

}  // namespace

double logreg_loss(const Matrix& x, const std::vector<int>& y, const std::vector<double>& weights,
                   double bias, double l2) {
  const std::vector<double> z = scores_of(x, weights, bias);
  double loss = 0.0;
  for (std::size_t i = 0; i < x.rows; ++i) {
    loss += (y[i] == 1) ? softplus(-z[i]) : softplus(z[i]);
  }
  loss /= static_cast<double>(x.rows);
  double reg = 0.0;
  for (double w : weights) reg += w * w;
  return loss + 0.5 * l2 * reg;
}

void logreg_gradient(const Matrix& x, const std::vector<int>& y, const std::vector<double>& weights,
                     double bias, double l2, std::vector<double>& grad_w, double& grad_b) {
  const std::vector<double> z = scores_of(x, weights, bias);
  grad_w.assign(x.cols, 0.0);
  grad_b = 0.0;
  const double inv_n = 1.0 / static_cast<double>(x.rows);
  for (std::size_t i = 0; i < x.rows; ++i) {
    const double resid = (sigmoid(z[i]) - static_cast<double>(y[i])) * inv_n;
    const double* row = &x.data[i * x.cols];
    for (std::size_t j = 0; j < x.cols; ++j) grad_w[j] += resid * row[j];
    grad_b += resid;
  }
  for (std::size_t j = 0; j < x.cols; ++j) grad_w[j] += l2 * weights[j];
}

LogRegModel train_logreg(const Matrix& x, const std::vector<int>& y, std::size_t max_iter,
                         const TrainOptions& opts) {
  if (x.rows != y.size()) throw std::invalid_argument("train_logreg: row/label count mismatch");
  if (x.rows < 2) throw std::invalid_argument("train_logreg: at least 2 samples required");
  check_binary(y);
  for (double v : x.data) {
    if (!std::isfinite(v)) throw std::invalid_argument("train_logreg: non-finite feature value");
  }

  LogRegModel model;
  model.weights.assign(x.cols, 0.0);
  model.bias = 0.0;

  std::vector<double> grad_w;
  double grad_b = 0.0;
  std::vector<double> trial_w(x.cols);
  double loss = logreg_loss(x, y, model.weights, model.bias, opts.l2);
  double step = 1.0;

  std::size_t iter = 0;
  for (; iter < max_iter; ++iter) {
    logreg_gradient(x, y, model.weights, model.bias, opts.l2, grad_w, grad_b);
    double gnorm2 = grad_b * grad_b;
    for (double g : grad_w) gnorm2 += g * g;
    if (std::sqrt(gnorm2) < opts.grad_tol) break;

    // Backtracking with Armijo condition; start from twice the last accepted
    // step so the search adapts in both directions.
    step = std::min(step * 2.0, 1e6);
    bool accepted = false;
    for (int half = 0; half < 60; ++half) {
      for (std::size_t j = 0; j < x.cols; ++j) trial_w[j] = model.weights[j] - step * grad_w[j];
      const double trial_b = model.bias - step * grad_b;
      const double trial_loss = logreg_loss(x, y, trial_w, trial_b, opts.l2);
      if (trial_loss <= loss - 0.5 * step * gnorm2) {
        model.weights = trial_w;
        model.bias = trial_b;
        loss = trial_loss;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;  // step underflow: at a numerical optimum
  }
  model.trained_iterations = iter;
  return model;
}

std::vector<double> predict_proba(const LogRegModel& model, const Matrix& x) {
  if (x.cols != model.weights.size()) {
    throw std::invalid_argument("predict_proba: dimension mismatch");
  }
  std::vector<double> p = scores_of(x, model.weights, model.bias);
  for (double& v : p) v = sigmoid(v);
  return p;
}

double auc(std::span<const double> scores, const std::vector<int>& labels) {
  if (scores.size() != labels.size()) throw std::invalid_argument("auc: length mismatch");
  check_binary(labels);
  const std::size_t n = scores.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // Average ranks over tie groups, then the Mann-Whitney identity.
  double rank_sum_pos = 0.0;
  std::size_t n_pos = 0;
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j < n && scores[order[j]] == scores[order[i]]) ++j;
    const double avg_rank = 0.5 * static_cast<double>(i + 1 + j);  // 1-based
    for (std::size_t k = i; k < j; ++k) {
      if (labels[order[k]] == 1) {
        rank_sum_pos += avg_rank;
        ++n_pos;
      }
    }
    i = j;
  }
  const std::size_t n_neg = n - n_pos;
  const double u = rank_sum_pos - 0.5 * static_cast<double>(n_pos) * static_cast<double>(n_pos + 1);
  return u / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

EvalMetrics classification_metrics(std::span<const double> scores, const std::vector<int>& labels,
                                   double threshold) {
  if (scores.size() != labels.size()) {
    throw std::invalid_argument("classification_metrics: length mismatch");
  }
  check_binary(labels);
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t tn = 0;
  std::size_t fn = 0;
  double brier = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const bool pred = scores[i] > threshold;
    if (labels[i] == 1) {
      pred ? ++tp : ++fn;
    } else {
      pred ? ++fp : ++tn;
    }
    const double d = scores[i] - static_cast<double>(labels[i]);
    brier += d * d;
  }
  const double n = static_cast<double>(scores.size());
  EvalMetrics m;
  m.auc = auc(scores, labels);
  m.accuracy = static_cast<double>(tp + tn) / n;
  m.brier = brier / n;
  m.precision = (tp + fp > 0) ? static_cast<double>(tp) / static_cast<double>(tp + fp)
                              : missing_value();
  m.sensitivity = static_cast<double>(tp) / static_cast<double>(tp + fn);
  m.specificity = static_cast<double>(tn) / static_cast<double>(tn + fp);
  return m;
}

std::vector<double> pool_predictions(const std::vector<std::vector<double>>& prob_vectors) {
  if (prob_vectors.empty()) throw std::invalid_argument("pool_predictions: no inputs");
  const std::size_t n = prob_vectors[0].size();
  for (const auto& v : prob_vectors) {
    if (v.size() != n) throw std::invalid_argument("pool_predictions: length mismatch");
  }
  std::vector<double> out(n, 0.0);
  for (const auto& v : prob_vectors) {
    for (std::size_t i = 0; i < n; ++i) out[i] += v[i];
  }
  for (double& v : out) v /= static_cast<double>(prob_vectors.size());
  return out;
}

std::vector<double> pool_predictions_vote(const std::vector<std::vector<double>>& prob_vectors,
                                          double threshold) {
  if (prob_vectors.empty()) throw std::invalid_argument("pool_predictions_vote: no inputs");
  const std::size_t n = prob_vectors[0].size();
  for (const auto& v : prob_vectors) {
    if (v.size() != n) throw std::invalid_argument("pool_predictions_vote: length mismatch");
  }
  std::vector<double> out(n, 0.0);
  for (const auto& v : prob_vectors) {
    for (std::size_t i = 0; i < n; ++i) out[i] += (v[i] > threshold) ? 1.0 : 0.0;
  }
  for (double& v : out) v /= static_cast<double>(prob_vectors.size());
  return out;
}

std::size_t select_max_iter(const Matrix& x, const std::vector<int>& y,
                            const std::vector<std::vector<std::size_t>>& folds,
                            const std::vector<std::size_t>& candidates,
                            const TrainOptions& opts) {
  if (candidates.empty()) throw std::invalid_argument("select_max_iter: no candidates");
  if (folds.empty()) throw std::invalid_argument("select_max_iter: no folds");

  std::vector<std::size_t> ordered = candidates;
  std::sort(ordered.begin(), ordered.end());

  double best_score = -1.0;
  std::size_t best = ordered.front();
  for (std::size_t cand : ordered) {
    double total = 0.0;
    for (const auto& fold : folds) {
      std::vector<std::uint8_t> in_fold(x.rows, 0);
      for (std::size_t i : fold) in_fold.at(i) = 1;
      Matrix train_x(x.rows - fold.size(), x.cols);
      std::vector<int> train_y;
      Matrix val_x(fold.size(), x.cols);
      std::vector<int> val_y;
      std::size_t ti = 0;
      std::size_t vi = 0;
      for (std::size_t i = 0; i < x.rows; ++i) {
        if (in_fold[i]) {
          std::copy_n(&x.data[i * x.cols], x.cols, &val_x.data[vi * x.cols]);
          val_y.push_back(y[i]);
          ++vi;
        } else {
          std::copy_n(&x.data[i * x.cols], x.cols, &train_x.data[ti * x.cols]);
          train_y.push_back(y[i]);
          ++ti;
        }
      }
      const LogRegModel model = train_logreg(train_x, train_y, cand, opts);
      const std::vector<double> probs = predict_proba(model, val_x);
      total += auc(probs, val_y);
    }
    const double mean_auc = total / static_cast<double>(folds.size());
    if (mean_auc > best_score) {
      best_score = mean_auc;
      best = cand;
    }
  }
  return best;
}

}  // namespace imputeval
