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

#include "simexplain/oracle_factory.h"

#include <cmath>

#include "simexplain/command_oracle.h"
#include "simexplain/dataset_io.h"
#include "simexplain/errors.h"

namespace simexplain {

MahalanobisOracle::MahalanobisOracle(PsdMatrix a, Representation rep)
    : a_(std::move(a)), rep_(std::move(rep)) {
  if (static_cast<std::size_t>(a_.dimension()) != rep_.dimension()) {
    throw ValidationError("matrix size does not match the representation");
  }
}

double MahalanobisOracle::distance(const Instance& x, const Instance& y) {
  return mahalanobis_distance(rep_.map(x), rep_.map(y), a_);
}

double CosineEmbeddingOracle::distance(const Instance& x, const Instance& y) {
  return cosine_distance(phi_->embed(x), phi_->embed(y));
}

void TableOracle::insert(const InstancePair& pair, double distance) {
  if (!std::isfinite(distance)) {
    throw ValidationError("table distance is not finite");
  }
  table_[pair.key()] = distance;
}

double TableOracle::distance(const Instance& x, const Instance& y) {
  InstancePair p{x, y};
  auto it = table_.find(p.key());
  if (it != table_.end()) return it->second;
  if (symmetric_) {
    InstancePair r{y, x};
    it = table_.find(r.key());
    if (it != table_.end()) return it->second;
  }
  throw OracleError("distance table has no entry for pair " + x.key() + " | " +
                    y.key());
}

std::string_view to_string(OracleKind kind) {
  switch (kind) {
    case OracleKind::kMahalanobis:
      return "mahalanobis";
    case OracleKind::kCosineEmbedding:
      return "cosine-embedding";
    case OracleKind::kCommand:
      return "command";
    case OracleKind::kTable:
      return "table";
  }
  return "mahalanobis";
}

OracleSpec OracleSpec::parse(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos || colon + 1 >= text.size()) {
    throw ValidationError("oracle spec must look like <kind>:<target>, got '" +
                          std::string(text) + "'");
  }
  const std::string_view kind = text.substr(0, colon);
  OracleSpec spec;
  spec.target = std::string(text.substr(colon + 1));
  if (kind == "mahalanobis") {
    spec.kind = OracleKind::kMahalanobis;
  } else if (kind == "cosine-embedding") {
    spec.kind = OracleKind::kCosineEmbedding;
  } else if (kind == "command") {
    spec.kind = OracleKind::kCommand;
  } else if (kind == "table") {
    spec.kind = OracleKind::kTable;
  } else {
    throw ValidationError("unknown oracle kind '" + std::string(kind) +
                          "' (expected mahalanobis, cosine-embedding, command "
                          "or table)");
  }
  return spec;
}

std::string OracleSpec::to_string() const {
  return std::string(simexplain::to_string(kind)) + ":" + target;
}

MahalanobisFile read_mahalanobis_file(const std::filesystem::path& path) {
  Json j = read_json_file(path);
  try {
    Eigen::MatrixXd m = matrix_from_json(j.at("matrix"));
    Representation rep;
    if (j.contains("representation")) {
      rep = representation_from_json(j.at("representation"));
    } else {
      rep = Representation::identity(
          Schema::numeric(static_cast<std::size_t>(m.rows())));
    }
    return {PsdMatrix(std::move(m)), std::move(rep)};
  } catch (const Json::exception& e) {
    throw ValidationError(path.string() + ": malformed matrix file: " + e.what());
  }
}

void write_mahalanobis_file(const MahalanobisFile& file,
                            const std::filesystem::path& path) {
  Json j{{"matrix", matrix_to_json(file.a.matrix())},
         {"representation", representation_to_json(file.representation)}};
  write_json_file(j, path);
}

std::shared_ptr<CachingOracle> make_oracle(const OracleSpec& spec,
                                           const InstancePair* probe) {
  std::shared_ptr<DistanceOracle> inner;
  switch (spec.kind) {
    case OracleKind::kMahalanobis: {
      MahalanobisFile f = read_mahalanobis_file(spec.target);
      inner = std::make_shared<MahalanobisOracle>(std::move(f.a),
                                                  std::move(f.representation));
      break;
    }
    case OracleKind::kCosineEmbedding: {
      auto phi = std::make_shared<LookupEmbedding>(load_embeddings(spec.target));
      inner = std::make_shared<CosineEmbeddingOracle>(std::move(phi));
      break;
    }
    case OracleKind::kTable:
      inner = load_table_oracle(spec.target, spec.symmetric.value_or(false));
      break;
    case OracleKind::kCommand: {
      if (probe == nullptr) {
        throw ValidationError("command oracles need a probe pair for the handshake");
      }
      auto cmd = std::make_shared<CommandOracle>(
          spec.target, spec.batch_size, spec.symmetric.value_or(false),
          spec.concurrency_safe);
      cmd->handshake(*probe);
      inner = std::move(cmd);
      break;
    }
  }
  return std::make_shared<CachingOracle>(std::move(inner));
}

}  // namespace simexplain
