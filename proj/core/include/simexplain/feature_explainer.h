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

#ifndef SIMEXPLAIN_FEATURE_EXPLAINER_H_
#define SIMEXPLAIN_FEATURE_EXPLAINER_H_

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "simexplain/neighborhood.h"
#include "simexplain/oracle.h"
#include "simexplain/psd_solver.h"
#include "simexplain/serialization.h"

namespace simexplain {

// Top words kept for global fits on token data.
inline constexpr std::size_t kGlobalFeatureCap = 500;

enum class SurrogateKind { kFull, kDiag, kGlobal };

std::string_view to_string(SurrogateKind kind);
SurrogateKind surrogate_kind_from_string(std::string_view name);

struct FeatureScore {
  std::size_t index = 0;
  std::string name;
  double contribution = 0.0;  // row sum of the contribution matrix
};

// A fitted Mahalanobis surrogate plus everything needed to interpret and
// reproduce it.
struct ExplanationReport {
  SurrogateKind kind = SurrogateKind::kFull;
  Eigen::MatrixXd a;  // PSD; diagonal for kDiag
  Representation representation;

  // Local fits: the explained pair and its decomposition.
  std::optional<InstancePair> pair;
  Eigen::VectorXd x_bar;
  Eigen::VectorXd y_bar;
  Eigen::MatrixXd contributions;
  double predicted_distance = 0.0;
  double bb_distance = 0.0;
  double residual = 0.0;  // bb_distance - predicted_distance
  // Features by decreasing |contribution|; lowest index first on ties.
  std::vector<FeatureScore> ranking;

  // Fit diagnostics.
  double objective = 0.0;
  double weighted_loss = 0.0;
  std::size_t iterations = 0;
  bool converged = true;
  bool degenerate = false;
  std::vector<std::string> warnings;
  std::vector<std::size_t> support;  // kDiag, selected coordinates

  // Provenance.
  FitConfig config;
  std::size_t sample_count = 0;
  std::uint64_t seed = 0;

  Eigen::VectorXd diagonal() const { return a.diagonal(); }
};

// Fits the full PSD surrogate on a neighborhood.
ExplanationReport fit_full(const Neighborhood& nbhd, DistanceOracle& oracle,
                           const FitConfig& cfg);

// Diagonal surrogate a >= 0 on s_ij = (xbar_ij - ybar_ij)^2 via NNLS, with
// optional greedy forward selection when cfg.max_nonzeros is set.
ExplanationReport fit_diag(const Neighborhood& nbhd, DistanceOracle& oracle,
                           const FitConfig& cfg);

// Chooses which interpretable features a global fit may use, given the
// n x d difference matrix and a cap. Returned indices must be distinct.
using FeatureSelector = std::function<std::vector<std::size_t>(
    const Eigen::MatrixXd& differences, std::size_t cap)>;

// Keeps the `cap` features that differ in the most pairs (lowest index on
// ties). A frequency stand-in for tf-idf ranking of words.
FeatureSelector nonzero_count_selector();

// Full surrogate fitted on a whole dataset with uniform weights.
ExplanationReport fit_global(std::span<const InstancePair> pairs,
                             const Representation& rep, DistanceOracle& oracle,
                             const FitConfig& cfg,
                             const FeatureSelector& selector = {},
                             std::size_t cap = kGlobalFeatureCap);

// Quadratic form of the stored matrix on the pair's interpretable
// difference. Tokens missing from a word-presence vocabulary are ignored.
double predict(const ExplanationReport& report, const InstancePair& pair);

// Fills contributions, prediction, residual and ranking for `pair`.
void attach_pair(ExplanationReport& report, const InstancePair& pair,
                 double bb_distance);

Json report_to_json(const ExplanationReport& report);
ExplanationReport report_from_json(const Json& j);

}  // namespace simexplain

#endif  // SIMEXPLAIN_FEATURE_EXPLAINER_H_
