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

#ifndef SIMEXPLAIN_PSD_SOLVER_H_
#define SIMEXPLAIN_PSD_SOLVER_H_

#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "simexplain/mahalanobis.h"

namespace simexplain {

inline constexpr double kDefaultL1Weight = 1e-4;

// Coefficient caps for the diagonal surrogate, per data family.
inline constexpr std::size_t kNumericMaxNonzeros = 4;
inline constexpr std::size_t kCategoricalMaxNonzeros = 10;
inline constexpr std::size_t kTokenMaxNonzeros = 5;

struct FitConfig {
  double l1_weight = kDefaultL1Weight;
  // Diagonal surrogate only.
  std::optional<std::size_t> max_nonzeros;
  std::size_t max_iters = 2000;
  // Relative objective decrease that counts as converged.
  double tol = 1e-8;
  // Backtracking: the Lipschitz estimate grows by this factor on rejection.
  double backtrack_factor = 2.0;
  // Project off-diagonals to zero each step (diagonal-constrained full fit).
  bool diagonal_only = false;
  // Starting point; projected onto the feasible set first. Defaults to 0.
  std::optional<Eigen::MatrixXd> initial;

  void validate() const;
  static FitConfig diagonal_defaults(InstanceKind kind);
};

// Weighted data for sum_i w_i (t_i - u_i^T A u_i)^2. Row i of `differences`
// is u_i.
struct QuadraticDesign {
  Eigen::MatrixXd differences;
  Eigen::VectorXd targets;
  Eigen::VectorXd weights;

  Eigen::Index rows() const { return differences.rows(); }
  Eigen::Index dimension() const { return differences.cols(); }
  void validate() const;
};

// u_i^T A u_i for every row.
Eigen::VectorXd quadratic_forms(const Eigen::MatrixXd& differences,
                                const Eigen::MatrixXd& a);
double weighted_loss(const QuadraticDesign& design, const Eigen::MatrixXd& a);
// weighted_loss + l1 * sum_jk |A_jk|.
double penalized_objective(const QuadraticDesign& design,
                           const Eigen::MatrixXd& a, double l1);

// Frobenius-nearest PSD matrix: symmetrize, eigendecompose, clip negative
// eigenvalues. Throws ValidationError on non-finite input.
PsdMatrix project_psd(const Eigen::MatrixXd& m);

struct PsdSolveResult {
  Eigen::MatrixXd a;
  double objective = 0.0;
  double loss = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  bool degenerate = false;
  // Objective after every iteration, starting with the initial point.
  std::vector<double> objective_trace;
};

// Accelerated proximal projected gradient with backtracking. Each step:
// gradient step on the weighted loss, elementwise soft-threshold,
// symmetrize, eigenvalue-clip to the PSD cone. Candidates that would
// increase the objective are rejected (momentum restarts), so the trace is
// non-increasing.
PsdSolveResult solve_psd_least_squares(const QuadraticDesign& design,
                                       const FitConfig& cfg);

}  // namespace simexplain

#endif  // SIMEXPLAIN_PSD_SOLVER_H_
