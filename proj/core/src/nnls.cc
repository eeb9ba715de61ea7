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

#include "simexplain/nnls.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "simexplain/errors.h"

namespace simexplain {

namespace {

Eigen::VectorXd solve_subset(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                             const std::vector<Eigen::Index>& cols) {
  Eigen::MatrixXd sub(a.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t k = 0; k < cols.size(); ++k) {
    sub.col(static_cast<Eigen::Index>(k)) = a.col(cols[k]);
  }
  return sub.completeOrthogonalDecomposition().solve(b);
}

}  // namespace

NnlsResult nnls(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                std::size_t max_iterations) {
  if (a.rows() != b.size()) throw ValidationError("nnls: dimension mismatch");
  if (!a.allFinite() || !b.allFinite()) {
    throw ValidationError("nnls: non-finite input");
  }
  const Eigen::Index n = a.cols();
  if (max_iterations == 0) max_iterations = 3 * static_cast<std::size_t>(n) + 3;

  NnlsResult res;
  res.x = Eigen::VectorXd::Zero(n);
  if (n == 0) {
    res.residual_sq = b.squaredNorm();
    return res;
  }
  const double tol = 10.0 * std::numeric_limits<double>::epsilon() *
                     a.cwiseAbs().colwise().sum().maxCoeff() *
                     static_cast<double>(std::max(a.rows(), n));

  std::vector<bool> passive(static_cast<std::size_t>(n), false);
  Eigen::VectorXd w = a.transpose() * (b - a * res.x);

  std::size_t iter = 0;
  while (true) {
    Eigen::Index t = -1;
    double best = tol;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!passive[static_cast<std::size_t>(j)] && w[j] > best) {
        best = w[j];
        t = j;
      }
    }
    if (t < 0) break;
    if (++iter > max_iterations) {
      res.converged = false;
      break;
    }
    passive[static_cast<std::size_t>(t)] = true;

    while (true) {
      std::vector<Eigen::Index> cols;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (passive[static_cast<std::size_t>(j)]) cols.push_back(j);
      }
      Eigen::VectorXd s_sub = solve_subset(a, b, cols);
      Eigen::VectorXd s = Eigen::VectorXd::Zero(n);
      for (std::size_t k = 0; k < cols.size(); ++k) {
        s[cols[k]] = s_sub[static_cast<Eigen::Index>(k)];
      }
      bool feasible = true;
      for (Eigen::Index j : cols) {
        if (s[j] <= 0.0) feasible = false;
      }
      if (feasible) {
        res.x = s;
        break;
      }
      double alpha = std::numeric_limits<double>::infinity();
      for (Eigen::Index j : cols) {
        if (s[j] <= 0.0) {
          alpha = std::min(alpha, res.x[j] / (res.x[j] - s[j]));
        }
      }
      res.x += alpha * (s - res.x);
      for (Eigen::Index j : cols) {
        if (res.x[j] <= tol) {
          res.x[j] = 0.0;
          passive[static_cast<std::size_t>(j)] = false;
        }
      }
    }
    w = a.transpose() * (b - a * res.x);
  }
  res.iterations = iter;
  res.residual_sq = (a * res.x - b).squaredNorm();
  return res;
}

ForwardSelection forward_select_nnls(const Eigen::MatrixXd& a,
                                     const Eigen::VectorXd& b,
                                     std::size_t max_nonzeros) {
  const Eigen::Index n = a.cols();
  ForwardSelection out;
  out.fit.x = Eigen::VectorXd::Zero(n);
  out.fit.residual_sq = b.squaredNorm();
  const double floor = 1e-14 * std::max(1.0, b.squaredNorm());

  std::vector<bool> used(static_cast<std::size_t>(n), false);
  while (out.support.size() < max_nonzeros) {
    Eigen::Index best_col = -1;
    NnlsResult best_fit;
    for (Eigen::Index j = 0; j < n; ++j) {
      if (used[static_cast<std::size_t>(j)]) continue;
      Eigen::MatrixXd sub(a.rows(), static_cast<Eigen::Index>(out.support.size()) + 1);
      for (std::size_t k = 0; k < out.support.size(); ++k) {
        sub.col(static_cast<Eigen::Index>(k)) =
            a.col(static_cast<Eigen::Index>(out.support[k]));
      }
      sub.col(sub.cols() - 1) = a.col(j);
      NnlsResult fit = nnls(sub, b);
      // Strict comparison keeps the lowest index on ties.
      if (best_col < 0 || fit.residual_sq < best_fit.residual_sq) {
        best_col = j;
        best_fit = std::move(fit);
      }
    }
    if (best_col < 0 || best_fit.residual_sq >= out.fit.residual_sq - floor) break;
    used[static_cast<std::size_t>(best_col)] = true;
    out.support.push_back(static_cast<std::size_t>(best_col));
    out.fit.x.setZero();
    for (std::size_t k = 0; k < out.support.size(); ++k) {
      out.fit.x[static_cast<Eigen::Index>(out.support[k])] =
          best_fit.x[static_cast<Eigen::Index>(k)];
    }
    out.fit.residual_sq = best_fit.residual_sq;
    out.fit.iterations += best_fit.iterations;
    out.fit.converged = out.fit.converged && best_fit.converged;
  }
  return out;
}

}  // namespace simexplain
