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

#ifndef SIMEXPLAIN_NNLS_H_
#define SIMEXPLAIN_NNLS_H_

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace simexplain {

struct NnlsResult {
  Eigen::VectorXd x;
  double residual_sq = 0.0;  // ||A x - b||^2
  std::size_t iterations = 0;
  bool converged = true;
};

// Lawson-Hanson active set solver for min ||A x - b||^2 s.t. x >= 0.
// max_iterations == 0 selects 3 * cols.
NnlsResult nnls(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                std::size_t max_iterations = 0);

struct ForwardSelection {
  NnlsResult fit;                    // full-width coefficients
  std::vector<std::size_t> support;  // in order of selection
};

// Greedy forward selection: repeatedly add the column whose NNLS refit
// gives the lowest residual (lowest index on ties) until max_nonzeros
// columns are active or no column improves the fit.
ForwardSelection forward_select_nnls(const Eigen::MatrixXd& a,
                                     const Eigen::VectorXd& b,
                                     std::size_t max_nonzeros);

}  // namespace simexplain

#endif  // SIMEXPLAIN_NNLS_H_
