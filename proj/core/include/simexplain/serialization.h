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

#ifndef SIMEXPLAIN_SERIALIZATION_H_
#define SIMEXPLAIN_SERIALIZATION_H_

#include <filesystem>
#include <string>

#include <Eigen/Dense>
#include <nlohmann/json.hpp>

#include "simexplain/instance.h"
#include "simexplain/representation.h"
#include "simexplain/version.h"

namespace simexplain {

using Json = nlohmann::json;

inline constexpr const char* kToolkitVersion = SIMEXPLAIN_VERSION;

// Matrices with more rows or columns than this are written as triplets.
inline constexpr Eigen::Index kDenseMatrixLimit = 200;

// Rounds to 12 significant digits so that dumped JSON is stable across
// platforms. Non-finite values become null.
Json round_number(double v);

// Instances are encoded as
//   numeric      [1.5, -2.0]
//   tokens       ["a", "c"]
//   categorical  {"categories": [0, 2]}
// or, when an id is attached, {"id": "...", "values"|"tokens"|"categories": ...}.
Json instance_to_json(const Instance& inst);
Instance instance_from_json(const Json& j);
// Accepts a plain string as a whitespace-tokenized sentence.
Json pair_to_json(const InstancePair& pair);
InstancePair pair_from_json(const Json& j);

Json vector_to_json(const Eigen::VectorXd& v);
Eigen::VectorXd vector_from_json(const Json& j);
// Dense row-major nested arrays up to kDenseMatrixLimit, otherwise
// {"rows", "cols", "triplets": [[i, j, v], ...]} with zeros omitted.
Json matrix_to_json(const Eigen::MatrixXd& m);
Eigen::MatrixXd matrix_from_json(const Json& j);

Json schema_to_json(const Schema& schema);
Schema schema_from_json(const Json& j);
Json representation_to_json(const Representation& rep);
Representation representation_from_json(const Json& j);

// Deterministic dump: sorted keys, two-space indent, trailing newline.
std::string dump_deterministic(const Json& j);
void write_json_file(const Json& j, const std::filesystem::path& path);
Json read_json_file(const std::filesystem::path& path);

}  // namespace simexplain

#endif  // SIMEXPLAIN_SERIALIZATION_H_
