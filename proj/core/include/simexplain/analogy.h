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

#ifndef SIMEXPLAIN_ANALOGY_H_
#define SIMEXPLAIN_ANALOGY_H_

#include <cstddef>
#include <cstdint>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "simexplain/embedding.h"
#include "simexplain/feature_explainer.h"
#include "simexplain/oracle.h"
#include "simexplain/serialization.h"

namespace simexplain {

inline constexpr double kTokenLambda1 = 0.5;
inline constexpr double kTabularLambda1 = 1.0;
inline constexpr double kDefaultLambda2 = 0.01;

struct AnalogyConfig {
  double lambda1 = kTabularLambda1;  // closeness
  double lambda2 = kDefaultLambda2;  // diversity
  double alpha = 0.0;                // feature-explainer coupling
  std::size_t k = 5;
  // The (delta_BB(z) - delta_BB(x))^2 term. Off only for ablations and
  // DirSim-equivalent runs.
  bool use_fidelity = true;

  void validate() const;
  static AnalogyConfig defaults_for(InstanceKind kind);
};

// 1 - cos of the angle between two direction vectors, in [0, 2]. Throws
// ValidationError on a zero vector.
double direction_distance(const Eigen::VectorXd& dz, const Eigen::VectorXd& dx);

// phi(right) - phi(left).
Eigen::VectorXd pair_direction(const InstancePair& pair, const Embedding& phi);

// D + alpha * (di_z - di_x)^2.
double closeness(double direction, double alpha, double di_z, double di_x);

// min(d(i1,j1) + d(i2,j2), d(i1,j2) + d(i2,j1)).
double delta_min(const InstancePair& zi, const InstancePair& zj,
                 DistanceOracle& oracle);

// The pair being explained, with everything the objective needs about it.
struct AnalogyTarget {
  InstancePair pair;
  double bb = 0.0;
  Eigen::VectorXd direction;
  // Surrogate fitted on the target; required when alpha > 0.
  std::optional<ExplanationReport> report;

  double delta_i() const;
};

AnalogyTarget make_target(const InstancePair& pair, DistanceOracle& oracle,
                          const Embedding& phi,
                          std::optional<ExplanationReport> report = std::nullopt);

// Candidate pairs with cached black-box distances and directions.
struct CandidatePool {
  std::vector<InstancePair> pairs;
  std::vector<double> bb;
  // Empty optional when phi(z2) == phi(z1).
  std::vector<std::optional<Eigen::VectorXd>> directions;

  std::size_t size() const { return pairs.size(); }
};

CandidatePool build_pool(std::vector<InstancePair> pairs, DistanceOracle& oracle,
                         const Embedding& phi);

// Lazily filled, thread-safe delta_min table over pool indices. The lower
// index is always the first argument, which fixes the value for
// asymmetric oracles.
class DeltaMinCache {
 public:
  DeltaMinCache(const CandidatePool& pool, DistanceOracle& oracle)
      : pool_(pool), oracle_(oracle) {}

  double get(std::size_t i, std::size_t j);
  std::size_t size() const;

 private:
  const CandidatePool& pool_;
  DistanceOracle& oracle_;
  mutable std::mutex mu_;
  std::unordered_map<std::uint64_t, double> table_;
};

// Per-candidate terms that do not depend on the rest of the set.
struct CandidateTerms {
  double fidelity = 0.0;   // (delta_BB(z) - delta_BB(x))^2
  double direction = 0.0;  // D(z, x)
  double closeness = 0.0;  // G(z, x)
};

CandidateTerms candidate_terms(const CandidatePool& pool, std::size_t index,
                               const AnalogyTarget& target,
                               const AnalogyConfig& cfg);

// Set objective over pool indices:
//   sum_i [fid_i] + lambda1 sum_i G_i - lambda2 sum_{i<=j} delta_min(z_i, z_j)^2
// Each unordered pair is counted once; the i == j terms vanish for
// pseudo-metric oracles.
double objective(std::span<const std::size_t> set, const CandidatePool& pool,
                 const AnalogyTarget& target, const AnalogyConfig& cfg,
                 DeltaMinCache& cache);

struct AnalogyTerms {
  double fidelity = 0.0;
  double direction = 0.0;
  double closeness = 0.0;
  // sum of delta_min^2 against the members chosen before this one.
  double diversity = 0.0;
  double self_diversity = 0.0;  // delta_min(z, z)^2
  double marginal = 0.0;        // objective increase when this was added
};

struct SelectedAnalogy {
  std::size_t pool_index = 0;
  InstancePair pair;
  double bb = 0.0;
  AnalogyTerms terms;
};

struct AnalogySet {
  std::string method;
  std::vector<SelectedAnalogy> items;
  double objective = 0.0;
  double target_bb = 0.0;
  AnalogyConfig config;
  std::vector<std::size_t> skipped;  // zero-direction candidates
  std::vector<std::string> warnings;

  std::size_t size() const { return items.size(); }
  std::vector<std::size_t> indices() const;
  std::vector<double> bb_values() const;
  // First k items; the objective is recomputed from the stored terms.
  AnalogySet prefix(std::size_t k) const;
};

// Greedy minimization: each step adds the remaining candidate with the
// smallest marginal objective increase, lowest pool index on ties. Pool
// indices in `exclude` are never considered.
AnalogySet greedy_select(const CandidatePool& pool, const AnalogyTarget& target,
                         const AnalogyConfig& cfg, DeltaMinCache& cache,
                         std::span<const std::size_t> exclude = {});
AnalogySet greedy_select(const CandidatePool& pool, const AnalogyTarget& target,
                         DistanceOracle& oracle, const AnalogyConfig& cfg);

enum class AblatedTerm { kNone, kFidelity, kCloseness, kDiversity };

std::string_view to_string(AblatedTerm term);
AblatedTerm ablated_term_from_string(std::string_view name);

// greedy_select with one term removed.
AnalogySet ablate(const CandidatePool& pool, const AnalogyTarget& target,
                  const AnalogyConfig& cfg, DeltaMinCache& cache, AblatedTerm drop,
                  std::span<const std::size_t> exclude = {});
AnalogySet ablate(const CandidatePool& pool, const AnalogyTarget& target,
                  DistanceOracle& oracle, const AnalogyConfig& cfg,
                  AblatedTerm drop);

// k candidates with the smallest direction distance, ascending.
AnalogySet dirsim_select(const CandidatePool& pool, const AnalogyTarget& target,
                         std::size_t k, std::span<const std::size_t> exclude = {});

Json analogy_set_to_json(const AnalogySet& set);
AnalogySet analogy_set_from_json(const Json& j);
Json analogy_config_to_json(const AnalogyConfig& cfg);
AnalogyConfig analogy_config_from_json(const Json& j);

}  // namespace simexplain

#endif  // SIMEXPLAIN_ANALOGY_H_
