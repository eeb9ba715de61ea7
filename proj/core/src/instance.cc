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

#include "simexplain/instance.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "simexplain/errors.h"

namespace simexplain {

std::string_view to_string(InstanceKind kind) {
  switch (kind) {
    case InstanceKind::kNumeric:
      return "numeric";
    case InstanceKind::kCategorical:
      return "categorical";
    case InstanceKind::kTokens:
      return "tokens";
  }
  return "unknown";
}

InstanceKind instance_kind_from_string(std::string_view name) {
  if (name == "numeric") return InstanceKind::kNumeric;
  if (name == "categorical") return InstanceKind::kCategorical;
  if (name == "tokens") return InstanceKind::kTokens;
  throw ValidationError("unknown instance kind '" + std::string(name) + "'");
}

Instance Instance::numeric(std::vector<double> values) {
  Instance inst;
  inst.kind_ = InstanceKind::kNumeric;
  inst.values_ = std::move(values);
  return inst;
}

Instance Instance::categorical(std::vector<std::size_t> categories) {
  Instance inst;
  inst.kind_ = InstanceKind::kCategorical;
  inst.categories_ = std::move(categories);
  return inst;
}

Instance Instance::tokens(std::vector<std::string> tokens) {
  std::sort(tokens.begin(), tokens.end());
  tokens.erase(std::unique(tokens.begin(), tokens.end()), tokens.end());
  Instance inst;
  inst.kind_ = InstanceKind::kTokens;
  inst.tokens_ = std::move(tokens);
  return inst;
}

Instance Instance::sentence(std::string_view text) {
  std::vector<std::string> words;
  std::istringstream in{std::string(text)};
  for (std::string w; in >> w;) words.push_back(std::move(w));
  return tokens(std::move(words));
}

std::size_t Instance::size() const {
  switch (kind_) {
    case InstanceKind::kNumeric:
      return values_.size();
    case InstanceKind::kCategorical:
      return categories_.size();
    case InstanceKind::kTokens:
      return tokens_.size();
  }
  return 0;
}

std::string Instance::key() const {
  std::string out;
  char buf[32];
  switch (kind_) {
    case InstanceKind::kNumeric:
      out = "n:";
      for (std::size_t j = 0; j < values_.size(); ++j) {
        if (j) out += ',';
        std::snprintf(buf, sizeof buf, "%.17g", values_[j]);
        out += buf;
      }
      break;
    case InstanceKind::kCategorical:
      out = "c:";
      for (std::size_t j = 0; j < categories_.size(); ++j) {
        if (j) out += ',';
        out += std::to_string(categories_[j]);
      }
      break;
    case InstanceKind::kTokens:
      out = "t:";
      for (std::size_t j = 0; j < tokens_.size(); ++j) {
        if (j) out += ' ';
        out += tokens_[j];
      }
      break;
  }
  return out;
}

bool operator==(const Instance& a, const Instance& b) {
  return a.kind_ == b.kind_ && a.values_ == b.values_ &&
         a.categories_ == b.categories_ && a.tokens_ == b.tokens_;
}

std::string InstancePair::key() const {
  return left.key() + '\x1f' + right.key();
}

Schema Schema::numeric(std::vector<std::string> names) {
  return Schema{InstanceKind::kNumeric, std::move(names), {}};
}

Schema Schema::numeric(std::size_t m) {
  std::vector<std::string> names;
  for (std::size_t j = 0; j < m; ++j) names.push_back("x" + std::to_string(j));
  return numeric(std::move(names));
}

Schema Schema::categorical(std::vector<std::string> names,
                           std::vector<std::size_t> cardinalities) {
  if (names.size() != cardinalities.size()) {
    throw ValidationError("categorical schema: names/cardinalities mismatch");
  }
  for (std::size_t c : cardinalities) {
    if (c == 0) throw ValidationError("categorical schema: zero cardinality");
  }
  return Schema{InstanceKind::kCategorical, std::move(names),
                std::move(cardinalities)};
}

Schema Schema::tokens() { return Schema{InstanceKind::kTokens, {}, {}}; }

void validate(const Instance& inst, const Schema& schema) {
  if (inst.kind() != schema.kind) {
    throw ValidationError("instance kind " + std::string(to_string(inst.kind())) +
                          " does not match schema kind " +
                          std::string(to_string(schema.kind)));
  }
  switch (inst.kind()) {
    case InstanceKind::kNumeric:
      if (inst.size() != schema.num_features()) {
        throw ValidationError("numeric instance has " +
                              std::to_string(inst.size()) + " values, schema " +
                              std::to_string(schema.num_features()));
      }
      for (std::size_t j = 0; j < inst.size(); ++j) {
        if (!std::isfinite(inst.values()[j])) {
          throw ValidationError("non-finite value in feature " +
                                schema.feature_names[j]);
        }
      }
      break;
    case InstanceKind::kCategorical:
      if (inst.size() != schema.num_features()) {
        throw ValidationError("categorical instance has " +
                              std::to_string(inst.size()) +
                              " features, schema " +
                              std::to_string(schema.num_features()));
      }
      for (std::size_t j = 0; j < inst.size(); ++j) {
        if (inst.categories()[j] >= schema.cardinalities[j]) {
          throw ValidationError(
              "category " + std::to_string(inst.categories()[j]) +
              " out of range for feature " + schema.feature_names[j] +
              " (cardinality " + std::to_string(schema.cardinalities[j]) + ")");
        }
      }
      break;
    case InstanceKind::kTokens:
      break;
  }
}

void validate(const InstancePair& pair, const Schema& schema) {
  validate(pair.left, schema);
  validate(pair.right, schema);
}

Vocabulary::Vocabulary(std::vector<std::string> words) {
  std::sort(words.begin(), words.end());
  words.erase(std::unique(words.begin(), words.end()), words.end());
  words_ = std::move(words);
}

Vocabulary Vocabulary::from_instances(std::span<const Instance> instances) {
  std::vector<std::string> words;
  for (const Instance& inst : instances) {
    if (inst.kind() != InstanceKind::kTokens) {
      throw ValidationError("vocabulary requires token instances");
    }
    words.insert(words.end(), inst.token_set().begin(), inst.token_set().end());
  }
  return Vocabulary(std::move(words));
}

Vocabulary Vocabulary::from_pair(const InstancePair& pair) {
  const Instance both[] = {pair.left, pair.right};
  return from_instances(both);
}

std::optional<std::size_t> Vocabulary::index_of(std::string_view word) const {
  auto it = std::lower_bound(words_.begin(), words_.end(), word);
  if (it == words_.end() || *it != word) return std::nullopt;
  return static_cast<std::size_t>(it - words_.begin());
}

}  // namespace simexplain
