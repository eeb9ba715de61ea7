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

#include "simexplain/metrics.h"

#include <algorithm>
#include <cmath>

#include "simexplain/errors.h"
#include "simexplain/neighborhood.h"

namespace simexplain {

namespace {

void check_same_size(std::span<const double> a, std::span<const double> b) {
  if (a.empty()) throw ValidationError("metric over an empty set");
  if (a.size() != b.size()) {
    throw ValidationError("predictions and truths differ in length");
  }
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!std::isfinite(a[i]) || !std::isfinite(b[i])) {
      throw ValidationError("metric input is not finite");
    }
  }
}

}  // namespace

double mean_absolute_error(std::span<const double> predictions,
                           std::span<const double> truths) {
  check_same_size(predictions, truths);
  double s = 0.0;
  for (std::size_t i = 0; i < truths.size(); ++i) {
    s += std::abs(truths[i] - predictions[i]);
  }
  return s / static_cast<double>(truths.size());
}

double pearson_correlation(std::span<const double> predictions,
                           std::span<const double> truths) {
  check_same_size(predictions, truths);
  const std::size_t n = truths.size();
  if (n < 2) throw ValidationError("correlation needs at least two points");
  double mp = 0.0;
  double mt = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mp += predictions[i];
    mt += truths[i];
  }
  mp /= static_cast<double>(n);
  mt /= static_cast<double>(n);
  double spp = 0.0;
  double stt = 0.0;
  double spt = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dp = predictions[i] - mp;
    const double dt = truths[i] - mt;
    spp += dp * dp;
    stt += dt * dt;
    spt += dp * dt;
  }
  if (spp == 0.0 || stt == 0.0) {
    throw ValidationError("correlation undefined: zero variance");
  }
  return std::clamp(spt / std::sqrt(spp * stt), -1.0, 1.0);
}

double standard_error(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n < 2) return 0.0;
  double m = 0.0;
  for (double v : values) m += v;
  m /= static_cast<double>(n);
  double ss = 0.0;
  for (double v : values) ss += (v - m) * (v - m);
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  return sd / std::sqrt(static_cast<double>(n));
}

MetricResult aggregate_folds(std::string metric, std::vector<double> fold_values) {
  if (fold_values.empty()) throw ValidationError("no fold values");
  MetricResult r;
  r.metric = std::move(metric);
  double m = 0.0;
  for (double v : fold_values) {
    if (!std::isfinite(v)) throw ValidationError("fold value is not finite");
    m += v;
  }
  r.value = m / static_cast<double>(fold_values.size());
  r.sem = standard_error(fold_values);
  r.fold_values = std::move(fold_values);
  return r;
}

std::vector<std::size_t> nearest_pairs(std::span<const InstancePair> pairs,
                                       const Representation& rep,
                                       const KernelConfig& kernel,
                                       DistanceOracle* oracle) {
  const std::size_t n = pairs.size();
  if (n < 2) throw ValidationError("neighbor search needs at least two pairs");
  kernel.validate();
  std::vector<std::size_t> out(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t best = n;
    double best_w = -1.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const double fl =
          kernel_distance(pairs[i].left, pairs[j].left, rep, kernel, oracle);
      const double fr =
          kernel_distance(pairs[i].right, pairs[j].right, rep, kernel, oracle);
      const double w = pair_weight(fl, fr, kernel);
      if (w > best_w) {
        best_w = w;
        best = j;
      }
    }
    out[i] = best;
  }
  return out;
}

MetricResult infidelity(std::span<const double> predictions,
                        std::span<const double> truths) {
  return {"infidelity", mean_absolute_error(predictions, truths), {}, 0.0};
}

MetricResult generalized_infidelity(std::span<const double> cross,
                                    std::span<const double> truths) {
  if (truths.size() < 2) {
    throw ValidationError("generalized infidelity needs at least two pairs");
  }
  return {"generalized_infidelity", mean_absolute_error(cross, truths), {}, 0.0};
}

MetricResult pearson_fidelity(std::span<const double> predictions,
                              std::span<const double> truths) {
  return {"fidelity_r", pearson_correlation(predictions, truths), {}, 0.0};
}

double analogy_prediction(const AnalogySet& set) {
  if (set.items.empty()) throw ValidationError("empty analogy set");
  double s = 0.0;
  for (const auto& it : set.items) s += it.bb;
  return s / static_cast<double>(set.items.size());
}

}  // namespace simexplain
