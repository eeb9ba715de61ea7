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

#include "simexplain/perturb.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "simexplain/errors.h"
#include "simexplain/random.h"

namespace simexplain {

FeatureStats FeatureStats::from_data(std::span<const Instance> data) {
  if (data.empty()) throw ValidationError("FeatureStats: empty dataset");
  const std::size_t m = data.front().size();
  FeatureStats s{std::vector<double>(m, 0.0), std::vector<double>(m, 0.0)};
  for (const Instance& inst : data) {
    if (inst.kind() != InstanceKind::kNumeric || inst.size() != m) {
      throw ValidationError("FeatureStats: inconsistent numeric dataset");
    }
    for (std::size_t j = 0; j < m; ++j) s.mean[j] += inst.values()[j];
  }
  const double n = static_cast<double>(data.size());
  for (double& v : s.mean) v /= n;
  for (const Instance& inst : data) {
    for (std::size_t j = 0; j < m; ++j) {
      double d = inst.values()[j] - s.mean[j];
      s.std[j] += d * d;
    }
  }
  for (double& v : s.std) v = std::sqrt(v / n);
  return s;
}

std::vector<Instance> perturb_numeric(const Instance& x, std::size_t n,
                                      const FeatureStats& stats,
                                      std::uint64_t seed) {
  if (x.kind() != InstanceKind::kNumeric) {
    throw ValidationError("perturb_numeric: instance is not numeric");
  }
  if (stats.std.size() != x.size()) {
    throw ValidationError("perturb_numeric: stats width " +
                          std::to_string(stats.std.size()) +
                          " does not match instance width " +
                          std::to_string(x.size()));
  }
  for (double s : stats.std) {
    if (!std::isfinite(s) || s < 0.0) {
      throw ValidationError("perturb_numeric: std must be finite and >= 0");
    }
  }
  Rng rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Instance> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> v(x.values());
    for (std::size_t j = 0; j < v.size(); ++j) v[j] += stats.std[j] * normal(rng);
    out.push_back(Instance::numeric(std::move(v)));
  }
  return out;
}

FixedConditionalModel::FixedConditionalModel(
    Schema schema, std::vector<std::vector<double>> probabilities)
    : schema_(std::move(schema)), probabilities_(std::move(probabilities)) {
  if (schema_.kind != InstanceKind::kCategorical ||
      probabilities_.size() != schema_.num_features()) {
    throw ValidationError("FixedConditionalModel: schema/table mismatch");
  }
  for (std::size_t j = 0; j < probabilities_.size(); ++j) {
    auto& p = probabilities_[j];
    if (p.size() != schema_.cardinalities[j]) {
      throw ValidationError("FixedConditionalModel: wrong table width");
    }
    double total = 0.0;
    for (double v : p) {
      if (!(v >= 0.0)) throw ValidationError("negative probability");
      total += v;
    }
    if (!(total > 0.0)) throw ValidationError("all-zero probability table");
    for (double& v : p) v /= total;
  }
}

std::vector<double> FixedConditionalModel::probabilities(
    std::size_t feature, const Instance& x) const {
  validate(x, schema_);
  return probabilities_.at(feature);
}

std::vector<double> CategoricalPerturber::sampling_distribution(
    std::size_t feature, const Instance& x) const {
  if (!model) throw ValidationError("categorical perturber has no model");
  if (!(bias >= 0.0) || !std::isfinite(bias)) {
    throw ValidationError("categorical perturber: bias must be >= 0");
  }
  std::vector<double> p = model->probabilities(feature, x);
  p.at(x.categories()[feature]) += bias;
  const double total = std::accumulate(p.begin(), p.end(), 0.0);
  for (double& v : p) v /= total;
  return p;
}

std::vector<Instance> perturb_categorical(const Instance& x, std::size_t n,
                                          const CategoricalPerturber& perturber,
                                          std::uint64_t seed) {
  if (!perturber.model) throw ValidationError("categorical perturber has no model");
  validate(x, perturber.model->schema());
  const std::size_t m = x.size();
  std::vector<std::vector<double>> cdfs(m);
  for (std::size_t j = 0; j < m; ++j) {
    auto p = perturber.sampling_distribution(j, x);
    std::partial_sum(p.begin(), p.end(), p.begin());
    cdfs[j] = std::move(p);
  }
  Rng rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<Instance> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::size_t> cats(m);
    for (std::size_t j = 0; j < m; ++j) {
      const auto& cdf = cdfs[j];
      double u = unif(rng) * cdf.back();
      auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
      cats[j] = std::min<std::size_t>(static_cast<std::size_t>(it - cdf.begin()),
                                      cdf.size() - 1);
    }
    out.push_back(Instance::categorical(std::move(cats)));
  }
  return out;
}

std::vector<Instance> perturb_tokens(const Instance& x, std::size_t n,
                                     std::uint64_t seed) {
  if (x.kind() != InstanceKind::kTokens) {
    throw ValidationError("perturb_tokens: instance is not a token set");
  }
  if (x.size() == 0) throw ValidationError("perturb_tokens: empty token set");
  const std::size_t len = x.size();
  Rng rng(seed);
  std::uniform_int_distribution<std::size_t> count(0, len - 1);
  std::vector<std::size_t> order(len);
  std::vector<Instance> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t remove = count(rng);
    std::iota(order.begin(), order.end(), 0);
    // Partial Fisher-Yates: the first `remove` slots are the dropped tokens.
    for (std::size_t r = 0; r < remove; ++r) {
      std::uniform_int_distribution<std::size_t> pick(r, len - 1);
      std::swap(order[r], order[pick(rng)]);
    }
    std::vector<bool> dropped(len, false);
    for (std::size_t r = 0; r < remove; ++r) dropped[order[r]] = true;
    std::vector<std::string> kept;
    for (std::size_t t = 0; t < len; ++t) {
      if (!dropped[t]) kept.push_back(x.token_set()[t]);
    }
    out.push_back(Instance::tokens(std::move(kept)));
  }
  return out;
}

std::string_view to_string(KernelDistance d) {
  switch (d) {
    case KernelDistance::kManhattan:
      return "manhattan";
    case KernelDistance::kCosine:
      return "cosine";
    case KernelDistance::kOracle:
      return "oracle";
  }
  return "unknown";
}

KernelDistance kernel_distance_from_string(std::string_view name) {
  if (name == "manhattan") return KernelDistance::kManhattan;
  if (name == "cosine") return KernelDistance::kCosine;
  if (name == "oracle") return KernelDistance::kOracle;
  throw ValidationError("unknown kernel distance '" + std::string(name) + "'");
}

KernelConfig KernelConfig::defaults_for(InstanceKind kind, std::size_t m) {
  KernelConfig cfg;
  cfg.sigma_sq = kSigmaSqPerFeature * static_cast<double>(std::max<std::size_t>(m, 1));
  cfg.distance = kind == InstanceKind::kTokens ? KernelDistance::kCosine
                                               : KernelDistance::kManhattan;
  return cfg;
}

void KernelConfig::validate() const {
  if (!(sigma_sq > 0.0) || !std::isfinite(sigma_sq)) {
    throw ValidationError("kernel sigma^2 must be finite and > 0");
  }
}

double pair_weight(double left_distance, double right_distance,
                   const KernelConfig& cfg) {
  cfg.validate();
  if (!std::isfinite(left_distance) || !std::isfinite(right_distance) ||
      left_distance < 0.0 || right_distance < 0.0) {
    throw ValidationError("pair_weight: kernel distances must be finite and >= 0");
  }
  return std::exp(-left_distance / cfg.sigma_sq) +
         std::exp(-right_distance / cfg.sigma_sq);
}

double manhattan_distance(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  if (a.size() != b.size()) throw ValidationError("manhattan: dimension mismatch");
  return (a - b).cwiseAbs().sum();
}

double presence_cosine_distance(const Eigen::VectorXd& a,
                                const Eigen::VectorXd& b) {
  if (a.size() != b.size()) throw ValidationError("cosine: dimension mismatch");
  const double na = a.norm();
  const double nb = b.norm();
  if (na == 0.0 && nb == 0.0) return 0.0;
  if (na == 0.0 || nb == 0.0) return 1.0;
  return std::max(0.0, 1.0 - a.dot(b) / (na * nb));
}

}  // namespace simexplain
