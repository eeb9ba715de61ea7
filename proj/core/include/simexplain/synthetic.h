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

#ifndef SIMEXPLAIN_SYNTHETIC_H_
#define SIMEXPLAIN_SYNTHETIC_H_

#include <cstdint>
#include <memory>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "simexplain/instance.h"
#include "simexplain/mahalanobis.h"
#include "simexplain/oracle.h"
#include "simexplain/random.h"

namespace simexplain {

// G G^T / d with G a d x rank standard normal matrix.
Eigen::MatrixXd random_psd(Eigen::Index d, Rng& rng, Eigen::Index rank = -1);

// sqrt(1 + u^T A u) - 1 + wiggle * sum_j (1 - cos u_j), u = x - y. Smooth,
// symmetric and zero on identical inputs, but not quadratic.
class SmoothOracle : public DistanceOracle {
 public:
  SmoothOracle(PsdMatrix a, double wiggle) : a_(std::move(a)), wiggle_(wiggle) {}

  double distance(const Instance& x, const Instance& y) override;
  bool symmetric() const override { return true; }

 private:
  PsdMatrix a_;
  double wiggle_;
};

enum class SyntheticFamily { kQuadratic, kSmooth };

std::string_view to_string(SyntheticFamily family);
SyntheticFamily synthetic_family_from_string(std::string_view name);

struct SyntheticConfig {
  SyntheticFamily family = SyntheticFamily::kQuadratic;
  std::size_t dim = 5;
  std::size_t num_pairs = 200;
  std::size_t num_training = 500;
  // Right = left + pair_spread * N(0, I).
  double pair_spread = 1.0;
  double wiggle = 0.1;
  std::uint64_t seed = 0;

  void validate() const;
};

struct SyntheticDataset {
  SyntheticConfig config;
  Schema schema;
  std::vector<InstancePair> pairs;
  // Instances drawn from the same distribution; used for feature scales.
  std::vector<Instance> training;
  Eigen::MatrixXd a_star;
  std::shared_ptr<DistanceOracle> oracle;
};

SyntheticDataset make_synthetic(const SyntheticConfig& cfg);

}  // namespace simexplain

#endif  // SIMEXPLAIN_SYNTHETIC_H_
