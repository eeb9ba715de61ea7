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

#include "simexplain/embedding.h"

#include <algorithm>
#include <cmath>

#include "simexplain/errors.h"

namespace simexplain {

Eigen::VectorXd IdentityEmbedding::embed(const Instance& inst) const {
  return rep_.map_lenient(inst).values;
}

LookupEmbedding::LookupEmbedding(std::map<std::string, Eigen::VectorXd> table)
    : table_(std::move(table)) {
  if (table_.empty()) throw ValidationError("embedding table is empty");
  dim_ = table_.begin()->second.size();
  for (const auto& [id, v] : table_) {
    if (v.size() != dim_) {
      throw ValidationError("embedding '" + id + "' has dimension " +
                            std::to_string(v.size()) + ", expected " +
                            std::to_string(dim_));
    }
    if (!v.allFinite()) {
      throw ValidationError("embedding '" + id + "' has non-finite entries");
    }
  }
}

Eigen::VectorXd LookupEmbedding::embed(const Instance& inst) const {
  if (!inst.id().empty()) {
    auto it = table_.find(inst.id());
    if (it != table_.end()) return it->second;
  }
  auto it = table_.find(inst.key());
  if (it != table_.end()) return it->second;
  if (inst.kind() == InstanceKind::kTokens) {
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(dim_);
    std::size_t found = 0;
    for (const std::string& w : inst.token_set()) {
      auto wt = table_.find(w);
      if (wt == table_.end()) continue;
      sum += wt->second;
      ++found;
    }
    if (found > 0) return sum / static_cast<double>(found);
  }
  throw ValidationError("no embedding for instance " +
                        (inst.id().empty() ? inst.key() : inst.id()));
}

double cosine_distance(const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
  if (u.size() != v.size()) {
    throw ValidationError("cosine_distance: dimension mismatch");
  }
  const double nu = u.norm();
  const double nv = v.norm();
  if (nu == 0.0 || nv == 0.0) {
    throw ValidationError("cosine_distance: zero vector");
  }
  double c = u.dot(v) / (nu * nv);
  c = std::clamp(c, -1.0, 1.0);
  return 1.0 - c;
}

}  // namespace simexplain
