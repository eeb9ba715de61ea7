// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SIMEXPLAIN_MAHALANOBIS_H_
#define SIMEXPLAIN_MAHALANOBIS_H_

#include <Eigen/Dense>

#include "simexplain/representation.h"

namespace simexplain {

// Symmetric positive semidefinite matrix parameterizing a Mahalanobis
// surrogate. Construction checks both invariants:
//   |A_jk - A_kj| <= 1e-12 * max(1, |A_jk|)
//   lambda_min >= -1e-8 * max(1, lambda_max)
class PsdMatrix {
 public:
  PsdMatrix() = default;
  explicit PsdMatrix(Eigen::MatrixXd a);

  static PsdMatrix identity(Eigen::Index d) {
    return PsdMatrix(Eigen::MatrixXd::Identity(d, d));
  }
  static PsdMatrix zero(Eigen::Index d) {
    return PsdMatrix(Eigen::MatrixXd::Zero(d, d));
  }
  static PsdMatrix diagonal(const Eigen::VectorXd& a);

  const Eigen::MatrixXd& matrix() const { return a_; }
  Eigen::Index dimension() const { return a_.rows(); }

 private:
  Eigen::MatrixXd a_;
};

bool is_symmetric(const Eigen::MatrixXd& m);
bool is_psd(const Eigen::MatrixXd& m);

// (x - y)^T A (x - y), clamped at zero. Throws ValidationError on
// dimension mismatch.
double mahalanobis_distance(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                            const PsdMatrix& a);
double mahalanobis_distance(const InterpretableVector& x,
                            const InterpretableVector& y, const PsdMatrix& a);

// C_jk = (x_j - y_j) A_jk (x_k - y_k). Sums to the Mahalanobis distance.
Eigen::MatrixXd contribution_matrix(const Eigen::VectorXd& x,
                                   const Eigen::VectorXd& y,
                                   const Eigen::MatrixXd& a);

// Per-feature contribution: the row sums of C (equal to column sums).
Eigen::VectorXd feature_contributions(const Eigen::MatrixXd& contributions);

struct SimilarityExplanation {
  double similarity = 0.0;
  // 1/d^2 - C_jk / max_dist; sums to `similarity`.
  Eigen::MatrixXd contributions;
};

// Converts a distance explanation into a similarity explanation using
// similarity = 1 - dist / max_dist. Throws ValidationError when
// max_dist <= 0 or the contribution matrix is not square.
double similarity_from_distance(double dist, double max_dist = 1.0);
SimilarityExplanation similarity_from_distance(
    const Eigen::MatrixXd& contributions, double max_dist = 1.0);

}  // namespace simexplain

#endif  // SIMEXPLAIN_MAHALANOBIS_H_
