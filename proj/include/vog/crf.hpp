#pragma once

#include <vector>

#include "vog/common.hpp"

namespace vog {

/// Linear-chain CRF parameters over L labels: pairwise transition scores
/// plus explicit start and end scores.
struct CrfParams {
  Matrix transitions;  // (L x L), entry (i, j) scores label i -> label j
  RowVector start;     // (L)
  RowVector end;       // (L)

  static CrfParams zeros(int n_labels);
  int n_labels() const { return static_cast<int>(start.size()); }
};

/// Additive decode-time masks; entries are 0 or kNegInf.
struct CrfConstraints {
  Matrix transitions;
  RowVector start;

  /// Forbids sequences that start at I or transition O -> I.
  static CrfConstraints bio();
};

/// Gradients of the negative log-likelihood.
struct CrfGradients {
  Matrix emissions;
  Matrix transitions;
  RowVector start;
  RowVector end;
};

/// start + per-position emissions + pairwise transitions + end, summed along
/// the given tag path.
double crf_score_sequence(const Matrix& emissions, const CrfParams& params, const std::vector<int>& tags);

/// log sum over all L^n paths of exp(score), via the forward recursion in
/// log space.
double crf_log_partition(const Matrix& emissions, const CrfParams& params);

/// Same quantity via the backward recursion; used to cross-check the forward
/// pass.
double crf_log_partition_backward(const Matrix& emissions, const CrfParams& params);

/// log_partition - score(gold). Non-negative for every input since the gold
/// path is one summand of the partition. When grads is non-null it receives
/// d(loss), computed from forward-backward marginals, scaled by grad_scale.
double crf_nll(const Matrix& emissions, const CrfParams& params, const std::vector<int>& tags,
               CrfGradients* grads = nullptr, double grad_scale = 1.0);

/// Highest-scoring path. Ties break toward the lower label index, both at
/// each backpointer and at the final state, so decoding is deterministic.
std::vector<int> crf_viterbi(const Matrix& emissions, const CrfParams& params,
                             const CrfConstraints* constraints = nullptr, double* best_score = nullptr);

}  // namespace vog
