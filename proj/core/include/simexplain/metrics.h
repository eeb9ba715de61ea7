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

#ifndef SIMEXPLAIN_METRICS_H_
#define SIMEXPLAIN_METRICS_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "simexplain/analogy.h"
#include "simexplain/perturb.h"
#include "simexplain/representation.h"

namespace simexplain {

struct MetricResult {
  std::string metric;
  double value = 0.0;
  std::vector<double> fold_values;
  double sem = 0.0;
};

// Mean absolute error. Throws ValidationError on empty or mismatched input.
double mean_absolute_error(std::span<const double> predictions,
                           std::span<const double> truths);

// Sample Pearson correlation. Throws ValidationError when fewer than two
// points are given or either side has zero variance.
double pearson_correlation(std::span<const double> predictions,
                           std::span<const double> truths);

// Sample standard deviation over sqrt(n); 0 for fewer than two values.
double standard_error(std::span<const double> values);

// Folds: mean of per-fold values plus their standard error.
MetricResult aggregate_folds(std::string metric, std::vector<double> fold_values);

// For each pair, the index of the other pair with the largest kernel
// weight exp(-F(x1,z1)/s2) + exp(-F(x2,z2)/s2). Self matches are excluded;
// ties go to the lowest index. F is taken in `rep` unless the kernel uses
// the oracle.
std::vector<std::size_t> nearest_pairs(std::span<const InstancePair> pairs,
                                       const Representation& rep,
                                       const KernelConfig& kernel,
                                       DistanceOracle* oracle = nullptr);

// Low-level forms over precomputed values.
MetricResult infidelity(std::span<const double> predictions,
                        std::span<const double> truths);
// cross[i] is the prediction for pair i from the explanation of its
// neighbor.
MetricResult generalized_infidelity(std::span<const double> cross,
                                    std::span<const double> truths);
MetricResult pearson_fidelity(std::span<const double> predictions,
                              std::span<const double> truths);
// Mean black-box distance of the selected analogies.
double analogy_prediction(const AnalogySet& set);

}  // namespace simexplain

#endif  // SIMEXPLAIN_METRICS_H_
