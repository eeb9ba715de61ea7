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

#include <random>

#include <gtest/gtest.h>

#include "reference.h"
#include "simexplain/errors.h"
#include "simexplain/nnls.h"
#include "simexplain/psd_solver.h"
#include "simexplain/random.h"
#include "simexplain/synthetic.h"

namespace simexplain {
namespace {

Eigen::MatrixXd gaussian(Eigen::Index r, Eigen::Index c, Rng& rng) {
  std::normal_distribution<double> n;
  Eigen::MatrixXd m(r, c);
  for (Eigen::Index i = 0; i < r; ++i) {
    for (Eigen::Index j = 0; j < c; ++j) m(i, j) = n(rng);
  }
  return m;
}

QuadraticDesign random_design(Eigen::Index n, Eigen::Index d, Rng& rng, double noise) {
  QuadraticDesign design;
  design.differences = gaussian(n, d, rng);
  Eigen::MatrixXd a = random_psd(d, rng);
  std::uniform_real_distribution<double> u(0.1, 2.0);
  design.targets = quadratic_forms(design.differences, a) + noise * gaussian(n, 1, rng);
  design.weights.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) design.weights(i) = u(rng);
  return design;
}

TEST(ProjectPsd, FixedPointOnPsdInput) {
  Rng rng(1);
  Eigen::MatrixXd a = random_psd(5, rng);
  EXPECT_TRUE(project_psd(a).matrix().isApprox(a, 1e-10));
}

TEST(ProjectPsd, ClipsNegativeEigenvalues) {
  Eigen::Matrix2d m;
  m << 1, 0, 0, -1;
  Eigen::Matrix2d want;
  want << 1, 0, 0, 0;
  EXPECT_TRUE(project_psd(m).matrix().isApprox(want, 1e-15));
}

TEST(ProjectPsd, NoFeasiblePointIsCloser) {
  Rng rng(3);
  for (int t = 0; t < 20; ++t) {
    Eigen::MatrixXd g = gaussian(4, 4, rng);
    Eigen::MatrixXd m = 0.5 * (g + g.transpose());
    const double dist = (project_psd(m).matrix() - m).norm();
    for (int s = 0; s < 100; ++s) {
      Eigen::MatrixXd p = random_psd(4, rng, 1 + static_cast<Eigen::Index>(s % 4));
      EXPECT_LE(dist, (p - m).norm() + 1e-12);
    }
  }
}

TEST(Solver, ZeroTargetsGiveExactZero) {
  Rng rng(4);
  QuadraticDesign d;
  d.differences = gaussian(30, 3, rng);
  d.targets = Eigen::VectorXd::Zero(30);
  d.weights = Eigen::VectorXd::Ones(30);
  PsdSolveResult r = solve_psd_least_squares(d, FitConfig{});
  EXPECT_TRUE(r.a.isZero(0.0));
  EXPECT_EQ(r.objective, 0.0);
}

TEST(Solver, DegenerateDesignFlagged) {
  QuadraticDesign d;
  d.differences = Eigen::MatrixXd::Zero(10, 3);
  d.targets = Eigen::VectorXd::Constant(10, 0.7);
  d.weights = Eigen::VectorXd::Ones(10);
  PsdSolveResult r = solve_psd_least_squares(d, FitConfig{});
  EXPECT_TRUE(r.degenerate);
  EXPECT_TRUE(r.a.isZero(0.0));
}

TEST(Solver, RejectsMalformedDesign) {
  QuadraticDesign d;
  d.differences = Eigen::MatrixXd::Ones(3, 2);
  d.targets = Eigen::VectorXd::Ones(2);
  d.weights = Eigen::VectorXd::Ones(3);
  EXPECT_THROW(solve_psd_least_squares(d, FitConfig{}), ValidationError);
  FitConfig bad;
  bad.l1_weight = -1;
  EXPECT_THROW(bad.validate(), ValidationError);
}

TEST(SolverProperty, ObjectiveTraceNonIncreasingAndFeasible) {
  Rng rng(5);
  for (int t = 0; t < 30; ++t) {
    QuadraticDesign d = random_design(50, 4, rng, 0.5);
    FitConfig cfg;
    cfg.l1_weight = 0.1;
    PsdSolveResult r = solve_psd_least_squares(d, cfg);
    for (std::size_t i = 1; i < r.objective_trace.size(); ++i) {
      EXPECT_LE(r.objective_trace[i], r.objective_trace[i - 1] * (1 + 1e-15));
    }
    EXPECT_TRUE(is_symmetric(r.a));
    EXPECT_TRUE(is_psd(r.a));
    EXPECT_NEAR(r.objective, penalized_objective(d, r.a, cfg.l1_weight), 1e-9 * r.objective);
  }
}

TEST(SolverProperty, NoFeasibleDirectionImproves) {
  // Convex problem: local optimality against random feasible moves implies
  // global optimality.
  Rng rng(6);
  for (int t = 0; t < 10; ++t) {
    QuadraticDesign d = random_design(60, 3, rng, 0.4);
    FitConfig cfg;
    cfg.l1_weight = 0.2;
    cfg.tol = 1e-13;
    cfg.max_iters = 50000;
    PsdSolveResult r = solve_psd_least_squares(d, cfg);
    const double f = r.objective;
    for (int s = 0; s < 200; ++s) {
      Eigen::MatrixXd dir = random_psd(3, rng) - (s % 2 == 0 ? 0.5 : 0.0) * r.a;
      for (double eps : {1e-3, 1e-5}) {
        Eigen::MatrixXd cand = project_psd(r.a + eps * dir).matrix();
        EXPECT_GE(penalized_objective(d, cand, cfg.l1_weight), f - 1e-9 * (1 + f));
      }
    }
  }
}

TEST(SolverProperty, DiagonalConstrainedMatchesNnls) {
  Rng rng(7);
  for (int t = 0; t < 20; ++t) {
    QuadraticDesign d = random_design(40, 4, rng, 0.3);
    FitConfig cfg;
    cfg.l1_weight = 0.0;
    cfg.diagonal_only = true;
    cfg.tol = 1e-14;
    cfg.max_iters = 100000;
    PsdSolveResult r = solve_psd_least_squares(d, cfg);
    EXPECT_TRUE(r.a.isDiagonal(0.0));
    Eigen::VectorXd sw = d.weights.cwiseSqrt();
    Eigen::MatrixXd s = d.differences.cwiseProduct(d.differences);
    NnlsResult n = nnls(sw.asDiagonal() * s, sw.cwiseProduct(d.targets));
    const double nnls_obj = weighted_loss(d, Eigen::MatrixXd(n.x.asDiagonal()));
    EXPECT_NEAR(r.objective, nnls_obj, 1e-6 * (1 + nnls_obj));
  }
}

TEST(SolverProperty, RestartsAgree) {
  Rng rng(8);
  for (int t = 0; t < 10; ++t) {
    QuadraticDesign d = random_design(40, 4, rng, 0.5);
    double lo = 1e300, hi = -1e300;
    for (int s = 0; s < 5; ++s) {
      FitConfig cfg;
      cfg.l1_weight = 0.05;
      if (s > 0) cfg.initial = 3.0 * gaussian(4, 4, rng);
      const double f = solve_psd_least_squares(d, cfg).objective;
      lo = std::min(lo, f);
      hi = std::max(hi, f);
    }
    EXPECT_LE((hi - lo) / lo, 1e-6);
  }
}

TEST(Nnls, MatchesActiveSetEnumeration) {
  Rng rng(9);
  for (int t = 0; t < 100; ++t) {
    Eigen::MatrixXd a = gaussian(12, 5, rng);
    Eigen::VectorXd b = gaussian(12, 1, rng);
    NnlsResult r = nnls(a, b);
    Eigen::VectorXd ref = testing::brute_nnls(a, b);
    EXPECT_TRUE((r.x.array() >= 0).all());
    EXPECT_NEAR(r.residual_sq, (a * ref - b).squaredNorm(), 1e-9);
    EXPECT_TRUE(r.x.isApprox(ref, 1e-7) || (r.x - ref).norm() < 1e-9);
  }
}

TEST(Nnls, ForwardSelectionSupportAndZeros) {
  Rng rng(10);
  Eigen::MatrixXd a = gaussian(50, 6, rng).cwiseAbs();
  Eigen::VectorXd truth(6);
  truth << 0, 3, 0, 1, 0, 0;
  Eigen::VectorXd b = a * truth;
  ForwardSelection fs = forward_select_nnls(a, b, 2);
  EXPECT_EQ(fs.support.size(), 2u);
  for (Eigen::Index j = 0; j < 6; ++j) {
    const bool in = std::find(fs.support.begin(), fs.support.end(),
                              static_cast<std::size_t>(j)) != fs.support.end();
    if (!in) {
      EXPECT_EQ(fs.fit.x(j), 0.0);
    }
  }
  EXPECT_NEAR(fs.fit.x(1), 3.0, 1e-9);
  EXPECT_NEAR(fs.fit.x(3), 1.0, 1e-9);
}

TEST(Nnls, ForwardSelectionTieGoesToLowestIndex) {
  Eigen::MatrixXd a(3, 3);
  a << 1, 1, 0, 0, 0, 1, 0, 0, 0;
  Eigen::VectorXd b(3);
  b << 1, 0, 0;
  ForwardSelection fs = forward_select_nnls(a, b, 1);
  ASSERT_EQ(fs.support.size(), 1u);
  EXPECT_EQ(fs.support[0], 0u);
}

}  // namespace
}  // namespace simexplain
