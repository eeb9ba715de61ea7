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

#include "simexplain/synthetic.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "simexplain/errors.h"
#include "simexplain/oracle_factory.h"
#include "simexplain/representation.h"

namespace simexplain {

Eigen::MatrixXd random_psd(Eigen::Index d, Rng& rng, Eigen::Index rank) {
  if (d <= 0) throw ValidationError("random_psd: dimension must be positive");
  if (rank < 0) rank = d;
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd g(d, rank);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < rank; ++j) g(i, j) = normal(rng);
  }
  Eigen::MatrixXd a = g * g.transpose() / static_cast<double>(d);
  return 0.5 * (a + a.transpose());
}

double SmoothOracle::distance(const Instance& x, const Instance& y) {
  if (x.kind() != InstanceKind::kNumeric || y.kind() != InstanceKind::kNumeric) {
    throw ValidationError("smooth oracle takes numeric instances");
  }
  const auto d = static_cast<Eigen::Index>(x.size());
  if (y.size() != x.size() || d != a_.dimension()) {
    throw ValidationError("smooth oracle: dimension mismatch");
  }
  Eigen::Map<const Eigen::VectorXd> xv(x.values().data(), d);
  Eigen::Map<const Eigen::VectorXd> yv(y.values().data(), d);
  Eigen::VectorXd u = xv - yv;
  const double q = std::max(0.0, u.dot(a_.matrix() * u));
  double w = 0.0;
  for (Eigen::Index j = 0; j < d; ++j) w += 1.0 - std::cos(u[j]);
  return std::sqrt(1.0 + q) - 1.0 + wiggle_ * w;
}

std::string_view to_string(SyntheticFamily family) {
  return family == SyntheticFamily::kQuadratic ? "quadratic" : "smooth";
}

SyntheticFamily synthetic_family_from_string(std::string_view name) {
  if (name == "quadratic") return SyntheticFamily::kQuadratic;
  if (name == "smooth") return SyntheticFamily::kSmooth;
  throw ValidationError("unknown synthetic family: " + std::string(name));
}

void SyntheticConfig::validate() const {
  if (dim == 0) throw ValidationError("synthetic dim must be >= 1");
  if (num_pairs == 0) throw ValidationError("synthetic num_pairs must be >= 1");
  if (num_training < 2) throw ValidationError("synthetic num_training must be >= 2");
  if (!(pair_spread > 0.0) || !std::isfinite(pair_spread)) {
    throw ValidationError("pair_spread must be finite and > 0");
  }
  if (!(wiggle >= 0.0) || !std::isfinite(wiggle)) {
    throw ValidationError("wiggle must be finite and >= 0");
  }
}

SyntheticDataset make_synthetic(const SyntheticConfig& cfg) {
  cfg.validate();
  SyntheticDataset ds;
  ds.config = cfg;
  ds.schema = Schema::numeric(cfg.dim);

  Rng matrix_rng(derive_seed(cfg.seed, 1));
  ds.a_star = random_psd(static_cast<Eigen::Index>(cfg.dim), matrix_rng);

  Rng rng(derive_seed(cfg.seed, 2));
  std::normal_distribution<double> normal(0.0, 1.0);
  auto draw = [&](double scale, const std::vector<double>* base) {
    std::vector<double> v(cfg.dim);
    for (std::size_t j = 0; j < cfg.dim; ++j) {
      v[j] = (base ? (*base)[j] : 0.0) + scale * normal(rng);
    }
    return v;
  };
  ds.pairs.reserve(cfg.num_pairs);
  for (std::size_t i = 0; i < cfg.num_pairs; ++i) {
    std::vector<double> l = draw(1.0, nullptr);
    std::vector<double> r = draw(cfg.pair_spread, &l);
    ds.pairs.push_back({Instance::numeric(std::move(l)), Instance::numeric(std::move(r))});
  }
  Rng train_rng(derive_seed(cfg.seed, 3));
  ds.training.reserve(cfg.num_training);
  for (std::size_t i = 0; i < cfg.num_training; ++i) {
    std::vector<double> v(cfg.dim);
    for (double& x : v) x = normal(train_rng);
    ds.training.push_back(Instance::numeric(std::move(v)));
  }

  PsdMatrix a(ds.a_star);
  if (cfg.family == SyntheticFamily::kQuadratic) {
    ds.oracle = std::make_shared<MahalanobisOracle>(
        std::move(a), Representation::identity(ds.schema));
  } else {
    ds.oracle = std::make_shared<SmoothOracle>(std::move(a), cfg.wiggle);
  }
  return ds;
}

}  // namespace simexplain
