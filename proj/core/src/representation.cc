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

#include "simexplain/representation.h"

#include "simexplain/errors.h"

namespace simexplain {

std::string_view to_string(RepKind kind) {
  switch (kind) {
    case RepKind::kIdentity:
      return "identity";
    case RepKind::kDummyCoded:
      return "dummy_coded";
    case RepKind::kWordPresence:
      return "word_presence";
  }
  return "unknown";
}

RepKind rep_kind_from_string(std::string_view name) {
  if (name == "identity") return RepKind::kIdentity;
  if (name == "dummy_coded") return RepKind::kDummyCoded;
  if (name == "word_presence") return RepKind::kWordPresence;
  throw ValidationError("unknown representation '" + std::string(name) + "'");
}

RepKind default_rep_kind(InstanceKind kind) {
  switch (kind) {
    case InstanceKind::kNumeric:
      return RepKind::kIdentity;
    case InstanceKind::kCategorical:
      return RepKind::kDummyCoded;
    case InstanceKind::kTokens:
      return RepKind::kWordPresence;
  }
  return RepKind::kIdentity;
}

Representation Representation::identity(const Schema& schema) {
  if (schema.kind != InstanceKind::kNumeric) {
    throw ValidationError("identity representation requires numeric schema");
  }
  Representation rep;
  rep.kind_ = RepKind::kIdentity;
  rep.schema_ = schema;
  rep.names_ =
      std::make_shared<const std::vector<std::string>>(schema.feature_names);
  return rep;
}

Representation Representation::dummy_coded(const Schema& schema) {
  if (schema.kind != InstanceKind::kCategorical) {
    throw ValidationError("dummy coding requires categorical schema");
  }
  Representation rep;
  rep.kind_ = RepKind::kDummyCoded;
  rep.schema_ = schema;
  std::vector<std::string> names;
  for (std::size_t j = 0; j < schema.num_features(); ++j) {
    rep.offsets_.push_back(names.size());
    for (std::size_t c = 0; c < schema.cardinalities[j]; ++c) {
      names.push_back(schema.feature_names[j] + "=" + std::to_string(c));
    }
  }
  rep.names_ = std::make_shared<const std::vector<std::string>>(std::move(names));
  return rep;
}

Representation Representation::word_presence(Vocabulary vocabulary) {
  Representation rep;
  rep.kind_ = RepKind::kWordPresence;
  rep.schema_ = Schema::tokens();
  rep.names_ =
      std::make_shared<const std::vector<std::string>>(vocabulary.words());
  rep.vocabulary_ = std::move(vocabulary);
  return rep;
}

Representation Representation::for_pair(const InstancePair& pair,
                                        const Schema& schema) {
  switch (schema.kind) {
    case InstanceKind::kNumeric:
      return identity(schema);
    case InstanceKind::kCategorical:
      return dummy_coded(schema);
    case InstanceKind::kTokens:
      return word_presence(Vocabulary::from_pair(pair));
  }
  throw ValidationError("unsupported schema kind");
}

std::size_t Representation::block_offset(std::size_t feature) const {
  if (kind_ != RepKind::kDummyCoded || feature >= offsets_.size()) {
    throw ValidationError("block_offset: not a dummy-coded feature");
  }
  return offsets_[feature];
}

InterpretableVector Representation::map(const Instance& inst) const {
  return map_impl(inst, /*lenient=*/false);
}

InterpretableVector Representation::map_lenient(const Instance& inst) const {
  return map_impl(inst, /*lenient=*/true);
}

InterpretableVector Representation::map_impl(const Instance& inst,
                                             bool lenient) const {
  if (!names_) throw ValidationError("representation is not initialized");
  if (default_rep_kind(inst.kind()) != kind_) {
    throw ValidationError("representation " + std::string(to_string(kind_)) +
                          " is incompatible with " +
                          std::string(to_string(inst.kind())) + " instance");
  }
  InterpretableVector out;
  out.rep_kind = kind_;
  out.feature_names = names_;
  out.values = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dimension()));
  switch (kind_) {
    case RepKind::kIdentity:
      validate(inst, schema_);
      for (std::size_t j = 0; j < inst.size(); ++j) {
        out.values[static_cast<Eigen::Index>(j)] = inst.values()[j];
      }
      break;
    case RepKind::kDummyCoded:
      validate(inst, schema_);
      for (std::size_t j = 0; j < inst.size(); ++j) {
        out.values[static_cast<Eigen::Index>(offsets_[j] +
                                             inst.categories()[j])] = 1.0;
      }
      break;
    case RepKind::kWordPresence:
      for (const std::string& w : inst.token_set()) {
        auto idx = vocabulary_.index_of(w);
        if (!idx) {
          if (lenient) continue;
          throw ValidationError("token '" + w + "' is not in the vocabulary");
        }
        out.values[static_cast<Eigen::Index>(*idx)] = 1.0;
      }
      break;
  }
  return out;
}

InterpretableVector to_interpretable(const Instance& inst,
                                     const Representation& rep) {
  return rep.map(inst);
}

}  // namespace simexplain
