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

#ifndef SIMEXPLAIN_EMBEDDING_H_
#define SIMEXPLAIN_EMBEDDING_H_

#include <map>
#include <string>

#include <Eigen/Dense>

#include "simexplain/instance.h"
#include "simexplain/representation.h"

namespace simexplain {

// The embedding phi used for direction similarity and for the cosine
// embedding oracle. Independent of the black box.
class Embedding {
 public:
  virtual ~Embedding() = default;
  virtual Eigen::VectorXd embed(const Instance& inst) const = 0;
};

// phi = interpretable representation. For tokens the representation's
// vocabulary should cover the whole pool; unknown tokens are ignored.
class IdentityEmbedding : public Embedding {
 public:
  explicit IdentityEmbedding(Representation rep) : rep_(std::move(rep)) {}
  Eigen::VectorXd embed(const Instance& inst) const override;

 private:
  Representation rep_;
};

// Vectors keyed by id. Lookup order for an instance:
//   1. its id(), when set and present;
//   2. its canonical key();
//   3. tokens only: the mean of the vectors of its known tokens.
// Throws ValidationError when none applies.
class LookupEmbedding : public Embedding {
 public:
  explicit LookupEmbedding(std::map<std::string, Eigen::VectorXd> table);

  Eigen::VectorXd embed(const Instance& inst) const override;
  Eigen::Index dimension() const { return dim_; }
  std::size_t size() const { return table_.size(); }

 private:
  std::map<std::string, Eigen::VectorXd> table_;
  Eigen::Index dim_ = 0;
};

// 1 - cos(u, v); throws ValidationError when either vector is zero.
double cosine_distance(const Eigen::VectorXd& u, const Eigen::VectorXd& v);

}  // namespace simexplain

#endif  // SIMEXPLAIN_EMBEDDING_H_
