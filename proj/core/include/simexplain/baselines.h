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

#ifndef SIMEXPLAIN_BASELINES_H_
#define SIMEXPLAIN_BASELINES_H_

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "simexplain/neighborhood.h"
#include "simexplain/oracle.h"
#include "simexplain/serialization.h"

namespace simexplain {

inline constexpr double kBaselineRidge = 1e-6;

// Minimizes sum_i w_i (t_i - X_i beta)^2 + ridge ||beta||^2. Picks the
// primal or dual normal equations by shape, so wide designs stay cheap.
Eigen::VectorXd weighted_ridge(const Eigen::MatrixXd& x, const Eigen::VectorXd& t,
                               const Eigen::VectorXd& w, double ridge);

// LIME on the concatenated pair: g_x^T xbar + g_y^T ybar + intercept.
struct LinearSurrogate {
  Eigen::VectorXd g_x;
  Eigen::VectorXd g_y;
  double intercept = 0.0;
  Representation representation;
  bool intercept_only = false;
  std::optional<InstancePair> pair;
  double predicted_distance = 0.0;
  double bb_distance = 0.0;

  double predict(const Eigen::VectorXd& xbar, const Eigen::VectorXd& ybar) const;
  double predict(const InstancePair& pair) const;
};

// Weighted ridge fit (intercept unpenalized). A design whose rows are all
// identical yields the intercept-only model at the weighted mean.
LinearSurrogate fit_concat_linear(const Neighborhood& nbhd, DistanceOracle& oracle,
                                  double ridge = kBaselineRidge);

// Unconstrained bilinear model xbar^T A ybar.
struct BilinearSurrogate {
  Eigen::MatrixXd a;
  Representation representation;
  bool rank_deficient = false;
  std::optional<InstancePair> pair;
  double predicted_distance = 0.0;
  double bb_distance = 0.0;

  double predict(const Eigen::VectorXd& xbar, const Eigen::VectorXd& ybar) const;
  double predict(const InstancePair& pair) const;
};

BilinearSurrogate fit_bilinear(const Neighborhood& nbhd, DistanceOracle& oracle,
                               double ridge = kBaselineRidge);

Json linear_to_json(const LinearSurrogate& s);
Json bilinear_to_json(const BilinearSurrogate& s);

}  // namespace simexplain

#endif  // SIMEXPLAIN_BASELINES_H_
