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

#include "simexplain/serialization.h"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "simexplain/errors.h"

namespace simexplain {

Json round_number(double v) {
  if (!std::isfinite(v)) return nullptr;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  double r = std::strtod(buf, nullptr);
  if (r == 0.0) r = 0.0;  // drop negative zero
  return r;
}

namespace {

std::vector<double> numbers_from(const Json& arr, const char* what) {
  std::vector<double> out;
  for (const Json& e : arr) {
    if (!e.is_number()) {
      throw ValidationError(std::string(what) + ": expected a number, got " +
                            e.dump());
    }
    out.push_back(e.get<double>());
  }
  return out;
}

std::vector<std::size_t> categories_from(const Json& arr) {
  std::vector<std::size_t> out;
  for (const Json& e : arr) {
    if (!e.is_number_integer() || e.get<long long>() < 0) {
      throw ValidationError("categories: expected a non-negative integer, got " +
                            e.dump());
    }
    out.push_back(e.get<std::size_t>());
  }
  return out;
}

Instance payload_from_array(const Json& arr) {
  if (!arr.empty() && arr.front().is_string()) {
    std::vector<std::string> words;
    for (const Json& e : arr) {
      if (!e.is_string()) throw ValidationError("mixed token array");
      words.push_back(e.get<std::string>());
    }
    return Instance::tokens(std::move(words));
  }
  return Instance::numeric(numbers_from(arr, "values"));
}

}  // namespace

Json instance_to_json(const Instance& inst) {
  Json payload;
  const char* field = "values";
  switch (inst.kind()) {
    case InstanceKind::kNumeric: {
      payload = Json::array();
      for (double v : inst.values()) payload.push_back(round_number(v));
      break;
    }
    case InstanceKind::kCategorical:
      payload = inst.categories();
      field = "categories";
      break;
    case InstanceKind::kTokens:
      payload = inst.token_set();
      field = "tokens";
      break;
  }
  if (inst.id().empty()) {
    if (inst.kind() == InstanceKind::kCategorical) {
      return Json{{"categories", payload}};
    }
    return payload;
  }
  return Json{{"id", inst.id()}, {field, payload}};
}

Instance instance_from_json(const Json& j) {
  if (j.is_string()) return Instance::sentence(j.get<std::string>());
  if (j.is_array()) return payload_from_array(j);
  if (!j.is_object()) {
    throw ValidationError("instance must be an array, string or object: " +
                          j.dump());
  }
  Instance inst;
  if (j.contains("values")) {
    inst = Instance::numeric(numbers_from(j.at("values"), "values"));
  } else if (j.contains("categories")) {
    inst = Instance::categorical(categories_from(j.at("categories")));
  } else if (j.contains("tokens")) {
    inst = payload_from_array(j.at("tokens"));
    if (inst.kind() != InstanceKind::kTokens && !j.at("tokens").empty()) {
      throw ValidationError("tokens must be strings");
    }
    if (j.at("tokens").empty()) inst = Instance::tokens({});
  } else if (j.contains("text")) {
    inst = Instance::sentence(j.at("text").get<std::string>());
  } else {
    throw ValidationError("instance object needs values, categories, tokens or "
                          "text: " + j.dump());
  }
  if (j.contains("id")) inst.set_id(j.at("id").get<std::string>());
  return inst;
}

Json pair_to_json(const InstancePair& pair) {
  return Json{{"left", instance_to_json(pair.left)},
              {"right", instance_to_json(pair.right)}};
}

InstancePair pair_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("left") || !j.contains("right")) {
    throw ValidationError("pair needs 'left' and 'right'");
  }
  InstancePair p{instance_from_json(j.at("left")),
                 instance_from_json(j.at("right"))};
  if (p.left.kind() != p.right.kind()) {
    throw ValidationError("pair members have different kinds");
  }
  return p;
}

Json vector_to_json(const Eigen::VectorXd& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(round_number(v[i]));
  return out;
}

Eigen::VectorXd vector_from_json(const Json& j) {
  auto values = numbers_from(j, "vector");
  return Eigen::Map<Eigen::VectorXd>(values.data(),
                                     static_cast<Eigen::Index>(values.size()));
}

Json matrix_to_json(const Eigen::MatrixXd& m) {
  if (m.rows() <= kDenseMatrixLimit && m.cols() <= kDenseMatrixLimit) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      Json row = Json::array();
      for (Eigen::Index k = 0; k < m.cols(); ++k) {
        row.push_back(round_number(m(i, k)));
      }
      rows.push_back(std::move(row));
    }
    return rows;
  }
  Json triplets = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index k = 0; k < m.cols(); ++k) {
      if (m(i, k) != 0.0) {
        triplets.push_back(Json::array({i, k, round_number(m(i, k))}));
      }
    }
  }
  return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"triplets", triplets}};
}

Eigen::MatrixXd matrix_from_json(const Json& j) {
  if (j.is_object()) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(j.at("rows").get<Eigen::Index>(),
                                              j.at("cols").get<Eigen::Index>());
    for (const Json& t : j.at("triplets")) {
      auto i = t.at(0).get<Eigen::Index>();
      auto k = t.at(1).get<Eigen::Index>();
      if (i < 0 || k < 0 || i >= m.rows() || k >= m.cols()) {
        throw ValidationError("matrix triplet out of range");
      }
      m(i, k) = t.at(2).get<double>();
    }
    return m;
  }
  if (!j.is_array()) throw ValidationError("matrix must be an array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const Eigen::Index cols =
      rows == 0 ? 0 : static_cast<Eigen::Index>(j.front().size());
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const Json& row = j.at(static_cast<std::size_t>(i));
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw ValidationError("matrix rows have unequal length");
    }
    for (Eigen::Index k = 0; k < cols; ++k) {
      const Json& e = row.at(static_cast<std::size_t>(k));
      if (!e.is_number()) throw ValidationError("matrix entry is not a number");
      m(i, k) = e.get<double>();
    }
  }
  return m;
}

Json schema_to_json(const Schema& schema) {
  Json out{{"kind", std::string(to_string(schema.kind))},
           {"feature_names", schema.feature_names}};
  if (schema.kind == InstanceKind::kCategorical) {
    out["cardinalities"] = schema.cardinalities;
  }
  return out;
}

Schema schema_from_json(const Json& j) {
  InstanceKind kind = instance_kind_from_string(j.at("kind").get<std::string>());
  switch (kind) {
    case InstanceKind::kNumeric:
      return Schema::numeric(
          j.at("feature_names").get<std::vector<std::string>>());
    case InstanceKind::kCategorical:
      return Schema::categorical(
          j.at("feature_names").get<std::vector<std::string>>(),
          j.at("cardinalities").get<std::vector<std::size_t>>());
    case InstanceKind::kTokens:
      return Schema::tokens();
  }
  throw ValidationError("bad schema");
}

Json representation_to_json(const Representation& rep) {
  Json out{{"kind", std::string(to_string(rep.kind()))}};
  if (rep.kind() == RepKind::kWordPresence) {
    out["vocabulary"] = rep.vocabulary().words();
  } else {
    out["schema"] = schema_to_json(rep.schema());
  }
  return out;
}

Representation representation_from_json(const Json& j) {
  RepKind kind = rep_kind_from_string(j.at("kind").get<std::string>());
  switch (kind) {
    case RepKind::kIdentity:
      return Representation::identity(schema_from_json(j.at("schema")));
    case RepKind::kDummyCoded:
      return Representation::dummy_coded(schema_from_json(j.at("schema")));
    case RepKind::kWordPresence:
      return Representation::word_presence(
          Vocabulary(j.at("vocabulary").get<std::vector<std::string>>()));
  }
  throw ValidationError("bad representation");
}

std::string dump_deterministic(const Json& j) { return j.dump(2) + "\n"; }

void write_json_file(const Json& j, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ValidationError("cannot open '" + path.string() + "' for writing");
  out << dump_deterministic(j);
  if (!out) throw ValidationError("failed writing '" + path.string() + "'");
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open '" + path.string() + "'");
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw ValidationError("malformed JSON in '" + path.string() + "': " +
                          e.what());
  }
}

}  // namespace simexplain
