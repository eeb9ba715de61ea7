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

#include "simexplain/mahalanobis.h"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "simexplain/errors.h"

namespace simexplain {

bool is_symmetric(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) return false;
  for (Eigen::Index j = 0; j < m.rows(); ++j) {
    for (Eigen::Index k = j + 1; k < m.cols(); ++k) {
      double scale = std::max(1.0, std::abs(m(j, k)));
      if (std::abs(m(j, k) - m(k, j)) > 1e-12 * scale) return false;
    }
  }
  return true;
}

bool is_psd(const Eigen::MatrixXd& m) {
  if (!m.allFinite() || !is_symmetric(m)) return false;
  if (m.rows() == 0) return true;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) return false;
  double lo = es.eigenvalues().minCoeff();
  double hi = es.eigenvalues().maxCoeff();
  return lo >= -1e-8 * std::max(1.0, hi);
}

PsdMatrix::PsdMatrix(Eigen::MatrixXd a) : a_(std::move(a)) {
  if (!is_psd(a_)) {
    throw ValidationError("matrix is not symmetric positive semidefinite");
  }
}

PsdMatrix PsdMatrix::diagonal(const Eigen::VectorXd& a) {
  return PsdMatrix(Eigen::MatrixXd(a.asDiagonal()));
}

double mahalanobis_distance(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                            const PsdMatrix& a) {
  if (x.size() != y.size() || x.size() != a.dimension()) {
    throw ValidationError("mahalanobis_distance: dimension mismatch");
  }
  Eigen::VectorXd u = x - y;
  double q = u.dot(a.matrix() * u);
  return std::max(0.0, q);
}

double mahalanobis_distance(const InterpretableVector& x,
                            const InterpretableVector& y, const PsdMatrix& a) {
  return mahalanobis_distance(x.values, y.values, a);
}

Eigen::MatrixXd contribution_matrix(const Eigen::VectorXd& x,
                                   const Eigen::VectorXd& y,
                                   const Eigen::MatrixXd& a) {
  if (x.size() != y.size() || a.rows() != x.size() || a.cols() != x.size()) {
    throw ValidationError("contribution_matrix: dimension mismatch");
  }
  Eigen::VectorXd u = x - y;
  return u.asDiagonal() * a * u.asDiagonal();
}

Eigen::VectorXd feature_contributions(const Eigen::MatrixXd& contributions) {
  return contributions.rowwise().sum();
}

double similarity_from_distance(double dist, double max_dist) {
  if (!(max_dist > 0.0)) {
    throw ValidationError("similarity_from_distance: max_dist must be > 0");
  }
  return 1.0 - dist / max_dist;
}

SimilarityExplanation similarity_from_distance(
    const Eigen::MatrixXd& contributions, double max_dist) {
  if (!(max_dist > 0.0)) {
    throw ValidationError("similarity_from_distance: max_dist must be > 0");
  }
  if (contributions.rows() != contributions.cols() ||
      contributions.rows() == 0) {
    throw ValidationError(
        "similarity_from_distance: contributions must be square and non-empty");
  }
  const double d = static_cast<double>(contributions.rows());
  SimilarityExplanation out;
  out.contributions =
      Eigen::MatrixXd::Constant(contributions.rows(), contributions.cols(),
                                1.0 / (d * d)) -
      contributions / max_dist;
  out.similarity = similarity_from_distance(contributions.sum(), max_dist);
  return out;
}

}  // namespace simexplain
