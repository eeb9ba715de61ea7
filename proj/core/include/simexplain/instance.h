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

#ifndef SIMEXPLAIN_INSTANCE_H_
#define SIMEXPLAIN_INSTANCE_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace simexplain {

enum class InstanceKind { kNumeric, kCategorical, kTokens };

std::string_view to_string(InstanceKind kind);
InstanceKind instance_kind_from_string(std::string_view name);

// A raw input to the black box. Exactly one of the payload vectors is
// populated, selected by kind(). Token instances are stored as a sorted set.
class Instance {
 public:
  Instance() = default;

  static Instance numeric(std::vector<double> values);
  static Instance categorical(std::vector<std::size_t> categories);
  // Duplicates are dropped; order is normalized to lexicographic.
  static Instance tokens(std::vector<std::string> tokens);
  // Whitespace-split convenience constructor.
  static Instance sentence(std::string_view text);

  InstanceKind kind() const { return kind_; }
  std::size_t size() const;

  const std::vector<double>& values() const { return values_; }
  const std::vector<std::size_t>& categories() const { return categories_; }
  const std::vector<std::string>& token_set() const { return tokens_; }

  // Optional external identifier, used by embedding lookups.
  const std::string& id() const { return id_; }
  Instance& set_id(std::string id) {
    id_ = std::move(id);
    return *this;
  }

  // Canonical text form; equal keys mean equal payloads (id excluded).
  std::string key() const;

  friend bool operator==(const Instance& a, const Instance& b);

 private:
  InstanceKind kind_ = InstanceKind::kNumeric;
  std::vector<double> values_;
  std::vector<std::size_t> categories_;
  std::vector<std::string> tokens_;
  std::string id_;
};

struct InstancePair {
  Instance left;
  Instance right;

  std::string key() const;
  friend bool operator==(const InstancePair& a, const InstancePair& b) = default;
};

// Column layout for tabular instances. Token data carries no schema; its
// feature space is a Vocabulary.
struct Schema {
  InstanceKind kind = InstanceKind::kNumeric;
  std::vector<std::string> feature_names;
  std::vector<std::size_t> cardinalities;  // categorical only

  std::size_t num_features() const { return feature_names.size(); }

  static Schema numeric(std::vector<std::string> names);
  static Schema numeric(std::size_t m);
  static Schema categorical(std::vector<std::string> names,
                            std::vector<std::size_t> cardinalities);
  static Schema tokens();
};

// Throws ValidationError when inst violates the schema: wrong kind, wrong
// width, non-finite numerics or out-of-range categories.
void validate(const Instance& inst, const Schema& schema);
void validate(const InstancePair& pair, const Schema& schema);

// Sorted, duplicate-free token list. Index order is alphabetical.
class Vocabulary {
 public:
  Vocabulary() = default;
  explicit Vocabulary(std::vector<std::string> words);

  static Vocabulary from_instances(std::span<const Instance> instances);
  static Vocabulary from_pair(const InstancePair& pair);

  std::size_t size() const { return words_.size(); }
  const std::vector<std::string>& words() const { return words_; }
  std::optional<std::size_t> index_of(std::string_view word) const;
  bool contains(std::string_view word) const {
    return index_of(word).has_value();
  }

 private:
  std::vector<std::string> words_;
};

}  // namespace simexplain

#endif  // SIMEXPLAIN_INSTANCE_H_
