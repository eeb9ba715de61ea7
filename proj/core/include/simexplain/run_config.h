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

#ifndef SIMEXPLAIN_RUN_CONFIG_H_
#define SIMEXPLAIN_RUN_CONFIG_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "simexplain/analogy.h"
#include "simexplain/perturb.h"
#include "simexplain/psd_solver.h"
#include "simexplain/serialization.h"

namespace simexplain {

// Environment variable consulted for the default seed.
inline constexpr const char* kSeedEnvVar = "SIMEXPLAIN_SEED";

// Seed from SIMEXPLAIN_SEED, or 0 when unset. Throws ValidationError when
// the variable is not an unsigned integer.
std::uint64_t default_seed();

// Everything that determines a run. Written next to every output so a run
// can be repeated. Numbers are stored at full precision, so the file form
// round-trips exactly.
struct RunConfig {
  std::string command;
  std::uint64_t seed = 0;
  std::optional<std::size_t> neighborhood_size;
  std::optional<double> kernel_sigma_sq;
  double bias = kDefaultBias;
  std::string mode;
  FitConfig fit;
  AnalogyConfig analogy;
  std::string oracle;
  std::string phi;
  std::map<std::string, std::string> inputs;
  std::map<std::string, std::string> outputs;
  std::map<std::string, std::string> options;
  bool strict = false;

  Json to_json() const;
  static RunConfig from_json(const Json& j);
};

bool operator==(const RunConfig& a, const RunConfig& b);

}  // namespace simexplain

#endif  // SIMEXPLAIN_RUN_CONFIG_H_
