#include "vog/crf.hpp"

#include <cmath>

#include "vog/types.hpp"

namespace vog {

namespace {

double log_sum_exp(const RowVector& v) {
  const double m = v.maxCoeff();
  if (m <= kNegInf) return kNegInf;
  return m + std::log((v.array() - m).exp().sum());
}

void check_tags(const Matrix& emissions, int n_labels, const std::vector<int>& tags) {
  if (static_cast<int>(tags.size()) != static_cast<int>(emissions.rows()))
    throw shape_error("tag sequence length does not match emissions");
  for (int t : tags) {
    if (t < 0 || t >= n_labels) throw shape_error("tag out of range");
  }
}

}  // namespace

CrfParams CrfParams::zeros(int n_labels) {
  CrfParams p;
  p.transitions = Matrix::Zero(n_labels, n_labels);
  p.start = RowVector::Zero(n_labels);
  p.end = RowVector::Zero(n_labels);
  return p;
}

CrfConstraints CrfConstraints::bio() {
  CrfConstraints c;
  c.transitions = Matrix::Zero(3, 3);
  c.start = RowVector::Zero(3);
  c.start(kTagI) = kNegInf;
  c.transitions(kTagO, kTagI) = kNegInf;
  return c;
}

double crf_score_sequence(const Matrix& emissions, const CrfParams& params,
                          const std::vector<int>& tags) {
  const int n = static_cast<int>(emissions.rows());
  check_tags(emissions, params.n_labels(), tags);
  double score = params.start(tags[0]) + emissions(0, tags[0]);
  for (int t = 1; t < n; ++t)
    score += params.transitions(tags[t - 1], tags[t]) + emissions(t, tags[t]);
  score += params.end(tags[n - 1]);
  return score;
}

double crf_log_partition(const Matrix& emissions, const CrfParams& params) {
  const int n = static_cast<int>(emissions.rows());
  const int L = params.n_labels();
  RowVector alpha = params.start + emissions.row(0);
  for (int t = 1; t < n; ++t) {
    RowVector next(L);
    for (int j = 0; j < L; ++j)
      next(j) = log_sum_exp(alpha + params.transitions.col(j).transpose()) + emissions(t, j);
    alpha = next;
  }
  return log_sum_exp(alpha + params.end);
}

double crf_log_partition_backward(const Matrix& emissions, const CrfParams& params) {
  const int n = static_cast<int>(emissions.rows());
  const int L = params.n_labels();
  RowVector beta = params.end;
  for (int t = n - 2; t >= 0; --t) {
    RowVector next(L);
    for (int i = 0; i < L; ++i)
      next(i) = log_sum_exp(params.transitions.row(i) + emissions.row(t + 1) + beta);
    beta = next;
  }
  return log_sum_exp(params.start + emissions.row(0) + beta);
}

double crf_nll(const Matrix& emissions, const CrfParams& params, const std::vector<int>& tags,
               CrfGradients* grads, double grad_scale) {
  const int n = static_cast<int>(emissions.rows());
  const int L = params.n_labels();
  check_tags(emissions, L, tags);

  // Forward and backward tables in log space.
  Matrix alpha(n, L), beta(n, L);
  alpha.row(0) = params.start + emissions.row(0);
  for (int t = 1; t < n; ++t)
    for (int j = 0; j < L; ++j)
      alpha(t, j) = log_sum_exp(RowVector(alpha.row(t - 1) + params.transitions.col(j).transpose())) +
                    emissions(t, j);
  beta.row(n - 1) = params.end;
  for (int t = n - 2; t >= 0; --t)
    for (int i = 0; i < L; ++i)
      beta(t, i) = log_sum_exp(RowVector(params.transitions.row(i) + emissions.row(t + 1) + beta.row(t + 1)));

  const double log_z = log_sum_exp(RowVector(alpha.row(n - 1) + params.end));
  const double loss = log_z - crf_score_sequence(emissions, params, tags);

  if (grads != nullptr) {
    grads->emissions = Matrix::Zero(n, L);
    grads->transitions = Matrix::Zero(L, L);
    grads->start = RowVector::Zero(L);
    grads->end = RowVector::Zero(L);

    // d(loss)/d(theta) = expected feature count - gold feature count.
    for (int t = 0; t < n; ++t) {
      for (int j = 0; j < L; ++j)
        grads->emissions(t, j) = std::exp(alpha(t, j) + beta(t, j) - log_z);
      grads->emissions(t, tags[t]) -= 1.0;
    }
    for (int t = 0; t + 1 < n; ++t)
      for (int i = 0; i < L; ++i)
        for (int j = 0; j < L; ++j)
          grads->transitions(i, j) += std::exp(alpha(t, i) + params.transitions(i, j) +
                                               emissions(t + 1, j) + beta(t + 1, j) - log_z);
    for (int t = 0; t + 1 < n; ++t) grads->transitions(tags[t], tags[t + 1]) -= 1.0;
    for (int j = 0; j < L; ++j) grads->start(j) = std::exp(alpha(0, j) + beta(0, j) - log_z);
    grads->start(tags[0]) -= 1.0;
    for (int j = 0; j < L; ++j) grads->end(j) = std::exp(alpha(n - 1, j) + params.end(j) - log_z);
    grads->end(tags[n - 1]) -= 1.0;

    if (grad_scale != 1.0) {
      grads->emissions *= grad_scale;
      grads->transitions *= grad_scale;
      grads->start *= grad_scale;
      grads->end *= grad_scale;
    }
  }
  return loss;
}

std::vector<int> crf_viterbi(const Matrix& emissions, const CrfParams& params,
                             const CrfConstraints* constraints, double* best_score) {
  const int n = static_cast<int>(emissions.rows());
  const int L = params.n_labels();
  Matrix delta(n, L);
  Eigen::MatrixXi back(n, L);

  delta.row(0) = params.start + emissions.row(0);
  if (constraints != nullptr) delta.row(0) += constraints->start;
  for (int t = 1; t < n; ++t) {
    for (int j = 0; j < L; ++j) {
      int best_i = 0;
      double best = -std::numeric_limits<double>::infinity();
      for (int i = 0; i < L; ++i) {
        double s = delta(t - 1, i) + params.transitions(i, j);
        if (constraints != nullptr) s += constraints->transitions(i, j);
        if (s > best) {  // strict: ties keep the lower label index
          best = s;
          best_i = i;
        }
      }
      delta(t, j) = best + emissions(t, j);
      back(t, j) = best_i;
    }
  }

  int best_j = 0;
  double best = -std::numeric_limits<double>::infinity();
  for (int j = 0; j < L; ++j) {
    const double s = delta(n - 1, j) + params.end(j);
    if (s > best) {
      best = s;
      best_j = j;
    }
  }
  if (best_score != nullptr) *best_score = best;

  std::vector<int> tags(static_cast<std::size_t>(n));
  tags[static_cast<std::size_t>(n) - 1] = best_j;
  for (int t = n - 1; t > 0; --t)
    tags[static_cast<std::size_t>(t) - 1] = back(t, tags[static_cast<std::size_t>(t)]);
  return tags;
}

}  // namespace vog
