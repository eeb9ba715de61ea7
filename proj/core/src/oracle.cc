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

#include "simexplain/oracle.h"

#include <algorithm>
#include <cmath>
#include <utility>

#include "simexplain/errors.h"

namespace simexplain {

std::vector<double> DistanceOracle::distances(
    std::span<const InstancePair> pairs) {
  std::vector<double> out;
  out.reserve(pairs.size());
  for (const InstancePair& p : pairs) out.push_back(distance(p.left, p.right));
  return out;
}

double FunctionOracle::distance(const Instance& a, const Instance& b) {
  return fn_(a, b);
}

CachingOracle::CachingOracle(std::shared_ptr<DistanceOracle> inner)
    : inner_(std::move(inner)) {
  if (!inner_) throw ValidationError("CachingOracle: null oracle");
}

std::string CachingOracle::cache_key(const Instance& a, const Instance& b) const {
  std::string ka = a.key(), kb = b.key();
  // A symmetric oracle shares one entry for (a, b) and (b, a).
  if (inner_->symmetric() && kb < ka) std::swap(ka, kb);
  return ka + '\x1f' + kb;
}

double CachingOracle::checked(double v, const std::string& key) const {
  if (!std::isfinite(v)) {
    throw OracleError("oracle returned a non-finite distance for pair " + key);
  }
  return v;
}

double CachingOracle::distance(const Instance& a, const Instance& b) {
  const std::string key = cache_key(a, b);
  {
    std::lock_guard<std::mutex> lock(mu_);
    ++requests_;
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
  }
  double v;
  if (inner_->concurrency_safe()) {
    v = inner_->distance(a, b);
  } else {
    std::lock_guard<std::mutex> call_lock(call_mu_);
    v = inner_->distance(a, b);
  }
  checked(v, key);
  std::lock_guard<std::mutex> lock(mu_);
  ++evaluations_;
  cache_.emplace(key, v);
  return v;
}

std::vector<double> CachingOracle::distances(
    std::span<const InstancePair> pairs) {
  std::vector<double> out(pairs.size());
  std::vector<InstancePair> misses;
  std::vector<std::string> miss_keys;
  std::vector<std::size_t> miss_slots;
  std::unordered_map<std::string, std::size_t> pending;
  {
    std::lock_guard<std::mutex> lock(mu_);
    requests_ += pairs.size();
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      std::string key = cache_key(pairs[i].left, pairs[i].right);
      auto it = cache_.find(key);
      if (it != cache_.end()) {
        out[i] = it->second;
        continue;
      }
      // Duplicates inside one batch are evaluated once.
      if (pending.emplace(key, misses.size()).second) {
        misses.push_back(pairs[i]);
        miss_keys.push_back(std::move(key));
      }
      miss_slots.push_back(i);
    }
  }
  if (misses.empty()) return out;

  std::vector<double> values;
  if (inner_->concurrency_safe()) {
    values = inner_->distances(misses);
  } else {
    std::lock_guard<std::mutex> call_lock(call_mu_);
    values = inner_->distances(misses);
  }
  if (values.size() != misses.size()) {
    throw OracleError("oracle returned " + std::to_string(values.size()) +
                      " distances for " + std::to_string(misses.size()) +
                      " pairs");
  }
  std::lock_guard<std::mutex> lock(mu_);
  evaluations_ += misses.size();
  for (std::size_t m = 0; m < misses.size(); ++m) {
    cache_.emplace(miss_keys[m], checked(values[m], miss_keys[m]));
  }
  for (std::size_t slot : miss_slots) {
    out[slot] = cache_.at(cache_key(pairs[slot].left, pairs[slot].right));
  }
  return out;
}

std::uint64_t CachingOracle::requests() const {
  std::lock_guard<std::mutex> lock(mu_);
  return requests_;
}

std::uint64_t CachingOracle::evaluations() const {
  std::lock_guard<std::mutex> lock(mu_);
  return evaluations_;
}

std::size_t CachingOracle::cache_size() const {
  std::lock_guard<std::mutex> lock(mu_);
  return cache_.size();
}

void CachingOracle::clear() {
  std::lock_guard<std::mutex> lock(mu_);
  cache_.clear();
  requests_ = 0;
  evaluations_ = 0;
}

std::vector<double> evaluate_all(DistanceOracle& oracle,
                                 std::span<const InstancePair> pairs) {
  return oracle.distances(pairs);
}

double max_asymmetry(DistanceOracle& oracle,
                     std::span<const InstancePair> pairs) {
  double worst = 0.0;
  for (const InstancePair& p : pairs) {
    double ab = oracle.distance(p.left, p.right);
    double ba = oracle.distance(p.right, p.left);
    worst = std::max(worst, std::abs(ab - ba));
  }
  return worst;
}

}  // namespace simexplain
