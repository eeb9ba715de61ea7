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

#ifndef SIMEXPLAIN_ORACLE_FACTORY_H_
#define SIMEXPLAIN_ORACLE_FACTORY_H_

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>

#include "simexplain/embedding.h"
#include "simexplain/mahalanobis.h"
#include "simexplain/oracle.h"
#include "simexplain/serialization.h"

namespace simexplain {

// (x - y)^T A (x - y) in a fixed interpretable representation.
class MahalanobisOracle : public DistanceOracle {
 public:
  MahalanobisOracle(PsdMatrix a, Representation rep);

  double distance(const Instance& x, const Instance& y) override;
  bool symmetric() const override { return true; }

  const PsdMatrix& matrix() const { return a_; }
  const Representation& representation() const { return rep_; }

 private:
  PsdMatrix a_;
  Representation rep_;
};

// 1 - cos(phi(x), phi(y)).
class CosineEmbeddingOracle : public DistanceOracle {
 public:
  explicit CosineEmbeddingOracle(std::shared_ptr<const Embedding> phi)
      : phi_(std::move(phi)) {}

  double distance(const Instance& x, const Instance& y) override;
  bool symmetric() const override { return true; }
  std::optional<RangeHint> range_hint() const override {
    return RangeHint{0.0, 2.0};
  }

 private:
  std::shared_ptr<const Embedding> phi_;
};

// Precomputed distances. A pair that is not listed raises OracleError; when
// declared symmetric the reversed pair is tried as well.
class TableOracle : public DistanceOracle {
 public:
  explicit TableOracle(bool symmetric = false) : symmetric_(symmetric) {}

  void insert(const InstancePair& pair, double distance);
  std::size_t size() const { return table_.size(); }

  double distance(const Instance& x, const Instance& y) override;
  bool symmetric() const override { return symmetric_; }

 private:
  bool symmetric_;
  std::unordered_map<std::string, double> table_;
};

enum class OracleKind { kMahalanobis, kCosineEmbedding, kCommand, kTable };

std::string_view to_string(OracleKind kind);

struct OracleSpec {
  OracleKind kind = OracleKind::kMahalanobis;
  // File path, or the shell command for kCommand.
  std::string target;
  std::optional<bool> symmetric;
  std::size_t batch_size = 256;
  bool concurrency_safe = false;

  // "mahalanobis:<file>", "cosine-embedding:<file>", "command:<cmd>",
  // "table:<file>".
  static OracleSpec parse(std::string_view text);
  std::string to_string() const;
};

// Matrix file: {"matrix": ..., "representation": ...}. Without a
// representation the matrix is read as acting on raw numeric features.
struct MahalanobisFile {
  PsdMatrix a;
  Representation representation;
};
MahalanobisFile read_mahalanobis_file(const std::filesystem::path& path);
void write_mahalanobis_file(const MahalanobisFile& file,
                            const std::filesystem::path& path);

// Wraps the oracle described by `spec` in a CachingOracle. Command oracles
// are probed with `probe` (required for them) before use.
std::shared_ptr<CachingOracle> make_oracle(const OracleSpec& spec,
                                           const InstancePair* probe = nullptr);

}  // namespace simexplain

#endif  // SIMEXPLAIN_ORACLE_FACTORY_H_
