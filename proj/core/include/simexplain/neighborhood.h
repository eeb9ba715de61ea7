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

#ifndef SIMEXPLAIN_NEIGHBORHOOD_H_
#define SIMEXPLAIN_NEIGHBORHOOD_H_

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "simexplain/oracle.h"
#include "simexplain/perturb.h"
#include "simexplain/representation.h"
#include "simexplain/serialization.h"

namespace simexplain {

// Draws perturbations of a single instance, dispatching on data kind.
class Perturber {
 public:
  static Perturber numeric(Schema schema, FeatureStats stats);
  static Perturber categorical(CategoricalPerturber perturber);
  static Perturber tokens();

  InstanceKind kind() const { return schema_.kind; }
  const Schema& schema() const { return schema_; }
  const FeatureStats& stats() const { return stats_; }
  const CategoricalPerturber& categorical_perturber() const {
    return categorical_;
  }

  std::vector<Instance> sample(const Instance& x, std::size_t n,
                               std::uint64_t seed) const;

  // sigma^2 = 0.5625 * m with m the raw feature count, or the local
  // vocabulary size for tokens.
  KernelConfig default_kernel(const InstancePair& pair) const;

 private:
  Schema schema_;
  FeatureStats stats_;
  CategoricalPerturber categorical_;
};

struct NeighborhoodMember {
  InstancePair pair;
  InterpretableVector left_bar;
  InterpretableVector right_bar;
  double weight = 0.0;

  Eigen::VectorXd difference() const { return left_bar.values - right_bar.values; }
};

// Perturbation neighborhood of one explained pair. Member 0 is the explained
// pair itself with weight 2. Immutable after construction.
struct Neighborhood {
  std::vector<NeighborhoodMember> members;
  Representation representation;
  KernelConfig kernel;
  std::uint64_t seed = 0;

  std::size_t size() const { return members.size(); }
  const NeighborhoodMember& explained() const { return members.front(); }
  std::vector<InstancePair> pairs() const;
  // Row i is left_bar_i - right_bar_i.
  Eigen::MatrixXd differences() const;
  Eigen::VectorXd weights() const;
  Eigen::MatrixXd left_matrix() const;
  Eigen::MatrixXd right_matrix() const;
};

// Kernel distance F between an instance and its perturbation, measured in
// the interpretable space (or by the oracle for KernelDistance::kOracle).
double kernel_distance(const Instance& original, const Instance& perturbed,
                       const Representation& rep, const KernelConfig& cfg,
                       DistanceOracle* oracle);

// Perturbs left and right independently (n - 1 samples each), pairs them
// index-wise after the unperturbed pair, maps them to the interpretable
// space and weights them. `oracle` is only consulted for kOracle kernels.
// Throws ValidationError for n == 0.
Neighborhood build_neighborhood(const InstancePair& pair, std::size_t n,
                                const KernelConfig& cfg,
                                const Perturber& perturber, std::uint64_t seed,
                                DistanceOracle* oracle = nullptr);

Json neighborhood_to_json(const Neighborhood& nbhd);
Neighborhood neighborhood_from_json(const Json& j);

}  // namespace simexplain

#endif  // SIMEXPLAIN_NEIGHBORHOOD_H_
