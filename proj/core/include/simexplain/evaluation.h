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

#ifndef SIMEXPLAIN_EVALUATION_H_
#define SIMEXPLAIN_EVALUATION_H_

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "simexplain/analogy.h"
#include "simexplain/baselines.h"
#include "simexplain/embedding.h"
#include "simexplain/feature_explainer.h"
#include "simexplain/metrics.h"
#include "simexplain/neighborhood.h"

namespace simexplain {

// An explanation of one pair.
class LocalModel {
 public:
  virtual ~LocalModel() = default;
  // Prediction of the explanation at the pair it explains.
  virtual double self_prediction() const = 0;
  // Prediction transferred to another pair. Throws UnsupportedMetricError
  // when the explanation cannot be applied elsewhere.
  virtual double predict(const InstancePair& pair) const = 0;
};

class Explainer {
 public:
  virtual ~Explainer() = default;
  virtual std::string name() const = 0;
  virtual bool supports_transfer() const { return true; }
  virtual std::unique_ptr<LocalModel> explain(const InstancePair& pair) = 0;
};

enum class SurrogateMethod { kFbFull, kFbDiag, kLime, kJsLime };

std::string_view to_string(SurrogateMethod m);

// Per-pair neighborhood surrogates. The neighborhood seed of a pair is
// derived from the run seed and the pair's content, so results do not
// depend on the order pairs are explained in.
class SurrogateExplainer : public Explainer {
 public:
  struct Options {
    SurrogateMethod method = SurrogateMethod::kFbFull;
    std::optional<std::size_t> neighborhood_size;  // default per data kind
    std::optional<double> kernel_sigma_sq;         // default 0.5625 * m
    FitConfig fit;
    std::uint64_t seed = 0;
  };

  SurrogateExplainer(Perturber perturber, DistanceOracle& oracle, Options opts);

  std::string name() const override;
  std::unique_ptr<LocalModel> explain(const InstancePair& pair) override;

  Neighborhood neighborhood_for(const InstancePair& pair) const;
  std::uint64_t pair_seed(const InstancePair& pair) const;

 private:
  Perturber perturber_;
  DistanceOracle& oracle_;
  Options opts_;
};

// Default neighborhood size for a data kind: 100 numeric, 200 categorical,
// 10 tokens.
std::size_t default_neighborhood_size(InstanceKind kind);

// One Mahalanobis surrogate fitted on a training set and shared by all
// pairs.
class GlobalExplainer : public Explainer {
 public:
  GlobalExplainer(std::span<const InstancePair> training, const Representation& rep,
                  DistanceOracle& oracle, const FitConfig& cfg,
                  const FeatureSelector& selector = {});

  std::string name() const override { return "gfbfull"; }
  std::unique_ptr<LocalModel> explain(const InstancePair& pair) override;
  const ExplanationReport& report() const { return *report_; }

 private:
  std::shared_ptr<const ExplanationReport> report_;
};

// Analogy explanations over a fixed candidate pool. Pool members equal to
// the explained pair are never selected.
class AnalogyExplainer : public Explainer {
 public:
  enum class Method { kAbE, kDirSim };

  AnalogyExplainer(std::shared_ptr<const CandidatePool> pool, DistanceOracle& oracle,
                   std::shared_ptr<const Embedding> phi, AnalogyConfig cfg,
                   Method method = Method::kAbE);

  std::string name() const override;
  bool supports_transfer() const override { return false; }
  std::unique_ptr<LocalModel> explain(const InstancePair& pair) override;

  // Selection of cfg.k analogies, or `k` when given.
  AnalogySet select(const InstancePair& pair,
                    std::optional<std::size_t> k = std::nullopt);

 private:
  std::shared_ptr<const CandidatePool> pool_;
  DistanceOracle& oracle_;
  std::shared_ptr<const Embedding> phi_;
  AnalogyConfig cfg_;
  Method method_;
  DeltaMinCache cache_;
};

// How the generalized metrics choose each pair's neighbor.
struct NeighborRule {
  Representation representation;
  KernelConfig kernel;
  DistanceOracle* oracle = nullptr;  // for KernelDistance::kOracle
};

// Schema-wide representation (dataset vocabulary for tokens) and the
// default kernel for it.
NeighborRule default_neighbor_rule(std::span<const InstancePair> pairs,
                                   const Schema& schema);

MetricResult infidelity(Explainer& explainer, std::span<const InstancePair> pairs,
                        DistanceOracle& oracle);
MetricResult generalized_infidelity(Explainer& explainer,
                                    std::span<const InstancePair> pairs,
                                    DistanceOracle& oracle,
                                    const NeighborRule& rule);
MetricResult pearson_fidelity(Explainer& explainer,
                              std::span<const InstancePair> pairs,
                              DistanceOracle& oracle);
double analogy_prediction(const AnalogySet& set, DistanceOracle& oracle);

struct CurvePoint {
  std::size_t k = 0;
  double infidelity = 0.0;
  std::optional<double> pearson;  // unset when undefined (zero variance)
};

// Infidelity and Pearson fidelity of the analogy predictor for every k in
// k_values. Uses one greedy run per pair at the largest k; greedy
// prefixes give the smaller sets.
std::vector<CurvePoint> sweep_k(AnalogyExplainer& explainer,
                                std::span<const InstancePair> pairs,
                                DistanceOracle& oracle,
                                std::span<const std::size_t> k_values);

// One line of the results table.
struct EvalRow {
  std::string method;
  std::string metric;
  std::optional<std::size_t> k;
  std::string fold;  // fold index, "mean" or "sem"
  double value = 0.0;

  friend bool operator==(const EvalRow&, const EvalRow&) = default;
};

// CSV with header method,metric,k,fold,value; values at 17 significant
// digits so the file reads back exactly.
void write_results_csv(const std::filesystem::path& path,
                       std::span<const EvalRow> rows);
std::vector<EvalRow> read_results_csv(const std::filesystem::path& path);

struct EvalData {
  Schema schema;
  std::vector<InstancePair> pairs;
  // Instances used for feature scales and the categorical model.
  std::vector<Instance> training;
  std::shared_ptr<DistanceOracle> oracle;
  // Embedding for analogy directions; defaults to the interpretable
  // representation.
  std::shared_ptr<const Embedding> phi;
};

struct EvalConfig {
  std::vector<std::string> methods{"fbfull", "fbdiag", "gfbfull", "lime",
                                   "jslime", "abe",    "dirsim"};
  std::size_t k_min = 1;
  std::size_t k_max = 10;
  std::size_t folds = 1;
  std::uint64_t seed = 0;
  std::optional<std::size_t> neighborhood_size;
  std::optional<double> kernel_sigma_sq;
  double bias = kDefaultBias;
  FitConfig fit;
  std::optional<AnalogyConfig> analogy;  // default per data kind
  std::size_t threads = 1;

  void validate() const;
};

struct EvalResult {
  std::vector<EvalRow> rows;
  std::vector<std::string> warnings;
};

// Perturber for a schema: numeric scales or the conditional categorical
// model come from `training`.
Perturber make_perturber(const Schema& schema, std::span<const Instance> training,
                         double bias = kDefaultBias);

// Fold of each pair, from a seeded hash of its content.
std::vector<std::size_t> assign_folds(std::span<const InstancePair> pairs,
                                      std::size_t folds, std::uint64_t seed);

// With one fold every pair is a test pair and the whole set serves as the
// analogy pool and global training set. With more, each fold is tested
// against the others.
EvalResult run_evaluation(const EvalData& data, const EvalConfig& cfg);

// Runs fn(i) for i in [0, n) on up to `threads` threads.
void parallel_for(std::size_t n, std::size_t threads,
                  const std::function<void(std::size_t)>& fn);

}  // namespace simexplain

#endif  // SIMEXPLAIN_EVALUATION_H_
