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

#include "simexplain/psd_solver.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

#include "simexplain/errors.h"

namespace simexplain {

void FitConfig::validate() const {
  if (!(l1_weight >= 0.0) || !std::isfinite(l1_weight)) {
    throw ValidationError("l1_weight must be finite and >= 0");
  }
  if (!(tol > 0.0)) throw ValidationError("tol must be > 0");
  if (max_iters == 0) throw ValidationError("max_iters must be >= 1");
  if (!(backtrack_factor > 1.0)) {
    throw ValidationError("backtrack_factor must be > 1");
  }
  if (max_nonzeros && *max_nonzeros == 0) {
    throw ValidationError("max_nonzeros must be >= 1 when set");
  }
}

FitConfig FitConfig::diagonal_defaults(InstanceKind kind) {
  FitConfig cfg;
  switch (kind) {
    case InstanceKind::kNumeric:
      cfg.max_nonzeros = kNumericMaxNonzeros;
      break;
    case InstanceKind::kCategorical:
      cfg.max_nonzeros = kCategoricalMaxNonzeros;
      break;
    case InstanceKind::kTokens:
      cfg.max_nonzeros = kTokenMaxNonzeros;
      break;
  }
  return cfg;
}

void QuadraticDesign::validate() const {
  if (differences.rows() == 0) throw ValidationError("empty design");
  if (targets.size() != differences.rows() ||
      weights.size() != differences.rows()) {
    throw ValidationError("design: rows/targets/weights size mismatch");
  }
  if (!differences.allFinite() || !targets.allFinite() || !weights.allFinite()) {
    throw ValidationError("design contains non-finite values");
  }
  if ((weights.array() < 0.0).any()) {
    throw ValidationError("design weights must be >= 0");
  }
}

Eigen::VectorXd quadratic_forms(const Eigen::MatrixXd& differences,
                                const Eigen::MatrixXd& a) {
  return (differences * a).cwiseProduct(differences).rowwise().sum();
}

double weighted_loss(const QuadraticDesign& design, const Eigen::MatrixXd& a) {
  Eigen::VectorXd r = design.targets - quadratic_forms(design.differences, a);
  return design.weights.dot(r.cwiseProduct(r));
}

double penalized_objective(const QuadraticDesign& design,
                           const Eigen::MatrixXd& a, double l1) {
  return weighted_loss(design, a) + l1 * a.cwiseAbs().sum();
}

PsdMatrix project_psd(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols()) throw ValidationError("project_psd: not square");
  if (!m.allFinite()) throw ValidationError("project_psd: non-finite input");
  if (m.rows() == 0) return PsdMatrix(m);
  Eigen::MatrixXd sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
  if (es.info() != Eigen::Success) {
    throw ValidationError("project_psd: eigendecomposition failed");
  }
  Eigen::VectorXd lambda = es.eigenvalues().cwiseMax(0.0);
  Eigen::MatrixXd out =
      es.eigenvectors() * lambda.asDiagonal() * es.eigenvectors().transpose();
  out = 0.5 * (out + out.transpose());
  return PsdMatrix(std::move(out));
}

namespace {

struct Problem {
  const QuadraticDesign& design;
  double l1;
  bool diagonal_only;

  // Returns the smooth loss and writes its gradient.
  double loss_and_grad(const Eigen::MatrixXd& a, Eigen::MatrixXd& grad) const {
    Eigen::VectorXd r = design.targets - quadratic_forms(design.differences, a);
    Eigen::VectorXd wr = design.weights.cwiseProduct(r);
    grad = -2.0 * design.differences.transpose() * wr.asDiagonal() *
           design.differences;
    if (diagonal_only) grad = Eigen::MatrixXd(grad.diagonal().asDiagonal());
    return wr.dot(r);
  }

  double objective(const Eigen::MatrixXd& a) const {
    return penalized_objective(design, a, l1);
  }

  // Soft-threshold, symmetrize, project.
  Eigen::MatrixXd prox(const Eigen::MatrixXd& v, double step) const {
    const double thr = step * l1;
    Eigen::MatrixXd s = v.unaryExpr([thr](double x) {
      if (x > thr) return x - thr;
      if (x < -thr) return x + thr;
      return 0.0;
    });
    return feasible(s);
  }

  Eigen::MatrixXd feasible(const Eigen::MatrixXd& s) const {
    if (diagonal_only) {
      return Eigen::MatrixXd(s.diagonal().cwiseMax(0.0).asDiagonal());
    }
    return project_psd(s).matrix();
  }

  // Largest eigenvalue of the loss Hessian, by power iteration on
  // V -> 2 sum_i w_i (u_i^T V u_i) u_i u_i^T.
  double lipschitz_estimate() const {
    const Eigen::Index d = design.dimension();
    Eigen::MatrixXd v = Eigen::MatrixXd::Identity(d, d);
    double lambda = 0.0;
    for (int it = 0; it < 50; ++it) {
      double norm = v.norm();
      if (norm == 0.0) return 0.0;
      v /= norm;
      Eigen::VectorXd q = quadratic_forms(design.differences, v);
      Eigen::MatrixXd hv = 2.0 * design.differences.transpose() *
                           design.weights.cwiseProduct(q).asDiagonal() *
                           design.differences;
      if (diagonal_only) hv = Eigen::MatrixXd(hv.diagonal().asDiagonal());
      double next = hv.norm();
      v = hv;
      if (std::abs(next - lambda) <= 1e-6 * next) {
        lambda = next;
        break;
      }
      lambda = next;
    }
    return lambda;
  }
};

}  // namespace

PsdSolveResult solve_psd_least_squares(const QuadraticDesign& design,
                                       const FitConfig& cfg) {
  cfg.validate();
  design.validate();
  const Eigen::Index d = design.dimension();
  Problem prob{design, cfg.l1_weight, cfg.diagonal_only};

  PsdSolveResult res;
  if (design.differences.cwiseAbs().maxCoeff() == 0.0 || d == 0) {
    res.a = Eigen::MatrixXd::Zero(d, d);
    res.degenerate = true;
    res.converged = true;
    res.loss = weighted_loss(design, res.a);
    res.objective = res.loss;
    res.objective_trace.push_back(res.objective);
    return res;
  }

  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(d, d);
  if (cfg.initial) {
    if (cfg.initial->rows() != d || cfg.initial->cols() != d) {
      throw ValidationError("initial matrix has the wrong shape");
    }
    x = prob.feasible(0.5 * (*cfg.initial + cfg.initial->transpose()));
  }
  double fx = prob.objective(x);
  res.objective_trace.push_back(fx);

  double lip = std::max(prob.lipschitz_estimate() * 1.01,
                        std::numeric_limits<double>::min());
  Eigen::MatrixXd y = x;
  Eigen::MatrixXd x_prev = x;
  double t = 1.0;
  Eigen::MatrixXd grad;
  std::size_t iter = 0;
  std::size_t quiet = 0;

  for (iter = 1; iter <= cfg.max_iters; ++iter) {
    const double fy_smooth = prob.loss_and_grad(y, grad);
    Eigen::MatrixXd z;
    // Backtracking on the quadratic upper bound of the smooth part.
    for (int bt = 0; bt < 60; ++bt) {
      z = prob.prox(y - grad / lip, 1.0 / lip);
      Eigen::MatrixXd delta = z - y;
      double bound = fy_smooth + (grad.cwiseProduct(delta)).sum() +
                     0.5 * lip * delta.squaredNorm();
      double fz_smooth = weighted_loss(design, z);
      if (fz_smooth <= bound + 1e-12 * std::max(1.0, std::abs(bound))) break;
      lip *= cfg.backtrack_factor;
    }
    const double fz = prob.objective(z);
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));

    const double f_before = fx;
    Eigen::MatrixXd x_new = x;
    if (fz <= fx) {
      x_new = z;
      fx = fz;
      y = x_new + ((t - 1.0) / t_next) * (x_new - x) +
          (t / t_next) * (z - x_new);
      t = t_next;
    } else {
      // Rejected: restart momentum from the incumbent.
      y = x;
      t = 1.0;
    }
    x_prev = x;
    x = std::move(x_new);
    res.objective_trace.push_back(fx);

    const double decrease = f_before - fx;
    const double scale = std::max(std::abs(f_before), 1e-300);
    const double step_norm = (x - x_prev).norm();
    const bool small_step = step_norm <= cfg.tol * std::max(1.0, x.norm());
    if (fx <= 1e-30 || (decrease <= cfg.tol * scale && small_step)) {
      if (++quiet >= 3 || fx <= 1e-30) {
        res.converged = true;
        break;
      }
    } else {
      quiet = 0;
    }
  }
  res.iterations = std::min(iter, cfg.max_iters);
  res.a = x;
  res.objective = fx;
  res.loss = weighted_loss(design, x);
  return res;
}

}  // namespace simexplain
