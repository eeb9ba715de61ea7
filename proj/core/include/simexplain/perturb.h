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

#ifndef SIMEXPLAIN_PERTURB_H_
#define SIMEXPLAIN_PERTURB_H_

#include <cstdint>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "simexplain/instance.h"

namespace simexplain {

inline constexpr double kDefaultBias = 0.1;
inline constexpr double kSigmaSqPerFeature = 0.5625;

// Neighborhood sizes used for the three data families.
inline constexpr std::size_t kNumericNeighborhood = 100;
inline constexpr std::size_t kCategoricalNeighborhood = 200;
inline constexpr std::size_t kTokenNeighborhood = 10;

// Per-feature Gaussian scale for numeric perturbations.
struct FeatureStats {
  std::vector<double> mean;
  std::vector<double> std;

  // Population statistics of a numeric dataset.
  static FeatureStats from_data(std::span<const Instance> data);
};

// n samples with coordinate j ~ Normal(x_j, std_j), independent.
// Throws ValidationError on negative or non-finite std or width mismatch.
std::vector<Instance> perturb_numeric(const Instance& x, std::size_t n,
                                      const FeatureStats& stats,
                                      std::uint64_t seed);

// p(feature j = c | all other features of x).
class ConditionalModel {
 public:
  virtual ~ConditionalModel() = default;
  virtual const Schema& schema() const = 0;
  virtual std::vector<double> probabilities(std::size_t feature,
                                            const Instance& x) const = 0;
};

// Context-free per-feature category distributions.
class FixedConditionalModel : public ConditionalModel {
 public:
  FixedConditionalModel(Schema schema,
                        std::vector<std::vector<double>> probabilities);

  const Schema& schema() const override { return schema_; }
  std::vector<double> probabilities(std::size_t feature,
                                    const Instance& x) const override;

 private:
  Schema schema_;
  std::vector<std::vector<double>> probabilities_;
};

struct LogisticTrainingConfig {
  double l2 = 1e-3;
  std::size_t epochs = 200;
  // Full-batch gradient descent step; 0 selects 1/L from a smoothness bound.
  double learning_rate = 0.0;
};

// One multinomial logistic regression per feature, predicting its category
// from the dummy-coded remaining features.
class LogisticConditionalModel : public ConditionalModel {
 public:
  static std::shared_ptr<LogisticConditionalModel> fit(
      const Schema& schema, std::span<const Instance> data,
      const LogisticTrainingConfig& config = {});

  const Schema& schema() const override { return schema_; }
  std::vector<double> probabilities(std::size_t feature,
                                    const Instance& x) const override;

 private:
  LogisticConditionalModel() = default;
  Eigen::VectorXd context_features(std::size_t feature, const Instance& x) const;

  Schema schema_;
  std::vector<std::size_t> offsets_;
  std::size_t total_width_ = 0;
  // weights_[j] is (context width + 1) x cardinality_j; last row is the bias.
  std::vector<Eigen::MatrixXd> weights_;
};

struct CategoricalPerturber {
  std::shared_ptr<const ConditionalModel> model;
  double bias = kDefaultBias;

  // (p + bias * e_orig) / (1 + bias).
  std::vector<double> sampling_distribution(std::size_t feature,
                                            const Instance& x) const;
};

// Each feature of each sample is drawn from the biased conditional given the
// original x. Throws ValidationError when x violates the model schema.
std::vector<Instance> perturb_categorical(const Instance& x, std::size_t n,
                                          const CategoricalPerturber& perturber,
                                          std::uint64_t seed);

// Each sample removes r tokens, r ~ Uniform{0, ..., |x|-1}, chosen uniformly
// without replacement; at least one token is kept. Throws on empty x.
std::vector<Instance> perturb_tokens(const Instance& x, std::size_t n,
                                     std::uint64_t seed);

enum class KernelDistance { kManhattan, kCosine, kOracle };

std::string_view to_string(KernelDistance d);
KernelDistance kernel_distance_from_string(std::string_view name);

struct KernelConfig {
  double sigma_sq = kSigmaSqPerFeature;
  KernelDistance distance = KernelDistance::kManhattan;

  // sigma^2 = 0.5625 * m; Manhattan for tabular data, cosine for tokens.
  static KernelConfig defaults_for(InstanceKind kind, std::size_t m);
  void validate() const;
};

// exp(-F_left / sigma^2) + exp(-F_right / sigma^2). Throws ValidationError on
// non-finite or negative distances.
double pair_weight(double left_distance, double right_distance,
                   const KernelConfig& cfg);

double manhattan_distance(const Eigen::VectorXd& a, const Eigen::VectorXd& b);
// Cosine distance that treats two zero vectors as identical (0) and a zero
// vector against a non-zero one as maximally distant (1).
double presence_cosine_distance(const Eigen::VectorXd& a,
                                const Eigen::VectorXd& b);

}  // namespace simexplain

#endif  // SIMEXPLAIN_PERTURB_H_
