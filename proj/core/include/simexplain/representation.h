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

#ifndef SIMEXPLAIN_REPRESENTATION_H_
#define SIMEXPLAIN_REPRESENTATION_H_

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "simexplain/instance.h"

namespace simexplain {

enum class RepKind { kIdentity, kDummyCoded, kWordPresence };

std::string_view to_string(RepKind kind);
RepKind rep_kind_from_string(std::string_view name);
// identity <-> numeric, dummy_coded <-> categorical, word_presence <-> tokens.
RepKind default_rep_kind(InstanceKind kind);

struct InterpretableVector {
  Eigen::VectorXd values;
  RepKind rep_kind = RepKind::kIdentity;
  std::shared_ptr<const std::vector<std::string>> feature_names;

  Eigen::Index dimension() const { return values.size(); }
};

// Maps raw instances into the interpretable space x-bar in which surrogates
// are fit. Cheap to copy; the name table is shared.
class Representation {
 public:
  Representation() = default;

  static Representation identity(const Schema& schema);
  static Representation dummy_coded(const Schema& schema);
  static Representation word_presence(Vocabulary vocabulary);
  // Builds the representation matching the pair's kind. Token pairs get a
  // local vocabulary from the union of both sides.
  static Representation for_pair(const InstancePair& pair, const Schema& schema);

  RepKind kind() const { return kind_; }
  std::size_t dimension() const { return names_ ? names_->size() : 0; }
  const std::vector<std::string>& feature_names() const { return *names_; }
  const Schema& schema() const { return schema_; }
  const Vocabulary& vocabulary() const { return vocabulary_; }

  // Throws ValidationError on kind mismatch, width mismatch or (word
  // presence) tokens missing from the vocabulary.
  InterpretableVector map(const Instance& inst) const;
  // Word presence only: tokens outside the vocabulary are ignored instead of
  // rejected. Used when a fitted surrogate is transferred to another pair.
  InterpretableVector map_lenient(const Instance& inst) const;

  // Offset of a categorical feature's one-hot block.
  std::size_t block_offset(std::size_t feature) const;

 private:
  InterpretableVector map_impl(const Instance& inst, bool lenient) const;

  RepKind kind_ = RepKind::kIdentity;
  Schema schema_;
  Vocabulary vocabulary_;
  std::vector<std::size_t> offsets_;
  std::shared_ptr<const std::vector<std::string>> names_;
};

InterpretableVector to_interpretable(const Instance& inst,
                                     const Representation& rep);

}  // namespace simexplain

#endif  // SIMEXPLAIN_REPRESENTATION_H_
