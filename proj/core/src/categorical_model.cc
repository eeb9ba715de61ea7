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

// Conditional category model for realistic categorical perturbations.

#include <cmath>

#include "simexplain/errors.h"
#include "simexplain/perturb.h"

namespace simexplain {

namespace {

void softmax_inplace(Eigen::Ref<Eigen::VectorXd> z) {
  const double mx = z.maxCoeff();
  z = (z.array() - mx).exp();
  z /= z.sum();
}

}  // namespace

// Context for feature j: one-hot blocks of every other feature, then a 1.
Eigen::VectorXd LogisticConditionalModel::context_features(
    std::size_t feature, const Instance& x) const {
  const std::size_t own = schema_.cardinalities[feature];
  Eigen::VectorXd f = Eigen::VectorXd::Zero(
      static_cast<Eigen::Index>(total_width_ - own + 1));
  std::size_t pos = 0;
  for (std::size_t k = 0; k < schema_.num_features(); ++k) {
    if (k == feature) continue;
    f[static_cast<Eigen::Index>(pos + x.categories()[k])] = 1.0;
    pos += schema_.cardinalities[k];
  }
  f[f.size() - 1] = 1.0;
  return f;
}

std::shared_ptr<LogisticConditionalModel> LogisticConditionalModel::fit(
    const Schema& schema, std::span<const Instance> data,
    const LogisticTrainingConfig& config) {
  if (schema.kind != InstanceKind::kCategorical) {
    throw ValidationError("logistic conditional model needs a categorical schema");
  }
  if (data.empty()) throw ValidationError("logistic conditional model: no data");
  if (config.l2 < 0.0) throw ValidationError("l2 must be >= 0");
  for (const Instance& inst : data) validate(inst, schema);

  std::shared_ptr<LogisticConditionalModel> model(new LogisticConditionalModel);
  model->schema_ = schema;
  for (std::size_t c : schema.cardinalities) {
    model->offsets_.push_back(model->total_width_);
    model->total_width_ += c;
  }

  const std::size_t m = schema.num_features();
  const auto n = static_cast<Eigen::Index>(data.size());
  for (std::size_t j = 0; j < m; ++j) {
    const auto classes = static_cast<Eigen::Index>(schema.cardinalities[j]);
    const auto width =
        static_cast<Eigen::Index>(model->total_width_ - schema.cardinalities[j] + 1);
    Eigen::MatrixXd features(n, width);
    Eigen::MatrixXd labels = Eigen::MatrixXd::Zero(n, classes);
    for (Eigen::Index i = 0; i < n; ++i) {
      features.row(i) = model->context_features(j, data[static_cast<std::size_t>(i)])
                            .transpose();
      labels(i, static_cast<Eigen::Index>(
                    data[static_cast<std::size_t>(i)].categories()[j])) = 1.0;
    }
    // Each row has m ones, so the mean softmax loss is (m / 2)-smooth.
    double lr = config.learning_rate;
    if (lr <= 0.0) lr = 1.0 / (0.5 * static_cast<double>(m) + config.l2);

    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(width, classes);
    Eigen::MatrixXd probs(n, classes);
    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
      probs = features * w;
      for (Eigen::Index i = 0; i < n; ++i) {
        Eigen::VectorXd row = probs.row(i).transpose();
        softmax_inplace(row);
        probs.row(i) = row.transpose();
      }
      Eigen::MatrixXd grad =
          features.transpose() * (probs - labels) / static_cast<double>(n);
      grad += config.l2 * w;
      w -= lr * grad;
    }
    model->weights_.push_back(std::move(w));
  }
  return model;
}

std::vector<double> LogisticConditionalModel::probabilities(
    std::size_t feature, const Instance& x) const {
  validate(x, schema_);
  if (feature >= schema_.num_features()) {
    throw ValidationError("feature index out of range");
  }
  Eigen::VectorXd z =
      weights_[feature].transpose() * context_features(feature, x);
  softmax_inplace(z);
  return std::vector<double>(z.data(), z.data() + z.size());
}

}  // namespace simexplain
