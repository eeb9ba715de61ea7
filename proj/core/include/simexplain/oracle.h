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

#ifndef SIMEXPLAIN_ORACLE_H_
#define SIMEXPLAIN_ORACLE_H_

#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "simexplain/instance.h"

namespace simexplain {

struct RangeHint {
  double lo = 0.0;
  double hi = 1.0;
};

// The black box being explained: any function from a pair of instances to a
// finite distance. Smaller means more similar.
class DistanceOracle {
 public:
  virtual ~DistanceOracle() = default;

  virtual double distance(const Instance& a, const Instance& b) = 0;

  // Batched evaluation. The default loops over distance(); subprocess-backed
  // oracles override it to amortize round trips.
  virtual std::vector<double> distances(std::span<const InstancePair> pairs);

  virtual bool symmetric() const { return false; }
  // Oracles that are not concurrency safe are serialized by CachingOracle.
  virtual bool concurrency_safe() const { return true; }
  virtual std::optional<RangeHint> range_hint() const { return std::nullopt; }

  double operator()(const InstancePair& p) { return distance(p.left, p.right); }
};

// Wraps a callable. Used for synthetic black boxes and tests.
class FunctionOracle : public DistanceOracle {
 public:
  using Fn = std::function<double(const Instance&, const Instance&)>;

  explicit FunctionOracle(Fn fn, bool symmetric = false)
      : fn_(std::move(fn)), symmetric_(symmetric) {}

  double distance(const Instance& a, const Instance& b) override;
  bool symmetric() const override { return symmetric_; }

 private:
  Fn fn_;
  bool symmetric_;
};

// Memoizes an oracle per (pair) within one run and records call telemetry.
// Non-finite results are rejected with OracleError.
class CachingOracle : public DistanceOracle {
 public:
  explicit CachingOracle(std::shared_ptr<DistanceOracle> inner);

  double distance(const Instance& a, const Instance& b) override;
  std::vector<double> distances(std::span<const InstancePair> pairs) override;

  bool symmetric() const override { return inner_->symmetric(); }
  bool concurrency_safe() const override { return true; }
  std::optional<RangeHint> range_hint() const override {
    return inner_->range_hint();
  }

  // Number of requests answered (including cache hits).
  std::uint64_t requests() const;
  // Number of evaluations forwarded to the wrapped oracle.
  std::uint64_t evaluations() const;
  std::size_t cache_size() const;
  void clear();

  DistanceOracle& inner() { return *inner_; }

 private:
  std::string cache_key(const Instance& a, const Instance& b) const;
  double checked(double v, const std::string& key) const;

  std::shared_ptr<DistanceOracle> inner_;
  mutable std::mutex mu_;
  // Held while calling an inner oracle that is not concurrency safe.
  std::mutex call_mu_;
  std::unordered_map<std::string, double> cache_;
  std::uint64_t requests_ = 0;
  std::uint64_t evaluations_ = 0;
};

// Evaluates oracle on every pair, in order.
std::vector<double> evaluate_all(DistanceOracle& oracle,
                                 std::span<const InstancePair> pairs);

// Largest |oracle(x,y) - oracle(y,x)| over the given pairs. Spot check for
// oracles that declare symmetry.
double max_asymmetry(DistanceOracle& oracle,
                     std::span<const InstancePair> pairs);

}  // namespace simexplain

#endif  // SIMEXPLAIN_ORACLE_H_
