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

// Reading and writing pair files, instance files, embeddings and distance
// tables.
//
// Pair CSV layout. The header names every column:
//
//   left_<name>[:<cardinality>] ... right_<name>[:<cardinality>] ...
//   [left_id,right_id] [bb_distance]
//
// A cardinality suffix marks categorical data (then every feature needs
// one). Token pairs use the two columns left_text,right_text holding
// whitespace-separated words. Pair JSONL holds one object per line:
// {"left": <instance>, "right": <instance>, "bb_distance": <optional>}.

#ifndef SIMEXPLAIN_DATASET_IO_H_
#define SIMEXPLAIN_DATASET_IO_H_

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "simexplain/instance.h"
#include "simexplain/oracle_factory.h"

namespace simexplain {

struct PairFile {
  Schema schema;
  std::vector<InstancePair> pairs;
  // Precomputed black-box distances, when the file has them.
  std::vector<std::optional<double>> bb_distances;
  std::vector<std::size_t> line_numbers;
  std::vector<std::string> warnings;
};

// Splits one CSV record. Fields may be double-quoted; "" escapes a quote.
std::vector<std::string> split_csv_line(std::string_view line);

// CSV unless the extension is .jsonl or .json. When `expected` is given the
// header (or JSONL content) must agree with it. Errors name the file, line
// and column.
PairFile load_pairs(const std::filesystem::path& path,
                    const Schema* expected = nullptr);
void write_pairs_csv(const std::filesystem::path& path, const Schema& schema,
                     std::span<const InstancePair> pairs,
                     std::span<const double> bb_distances = {});

// Plain instance CSV: header <name>[:<cardinality>] per feature, or a single
// `text` column for token data.
std::vector<Instance> load_instances(const std::filesystem::path& path,
                                     const Schema& schema);
void write_instances_csv(const std::filesystem::path& path, const Schema& schema,
                         std::span<const Instance> instances);

// JSON lines {"id": <string>, "vector": [..]}.
std::map<std::string, Eigen::VectorXd> load_embeddings(
    const std::filesystem::path& path);

// JSON lines {"left": .., "right": .., "distance": <number>}.
std::shared_ptr<TableOracle> load_table_oracle(const std::filesystem::path& path,
                                               bool symmetric);

}  // namespace simexplain

#endif  // SIMEXPLAIN_DATASET_IO_H_
