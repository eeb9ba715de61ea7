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

#include "simexplain/run_config.h"

#include <charconv>
#include <cstdlib>
#include <cstring>

#include "simexplain/errors.h"

namespace simexplain {

std::uint64_t default_seed() {
  const char* env = std::getenv(kSeedEnvVar);
  if (env == nullptr || *env == '\0') return 0;
  std::uint64_t v = 0;
  const char* end = env + std::strlen(env);
  auto [ptr, ec] = std::from_chars(env, end, v);
  if (ec != std::errc() || ptr != end) {
    throw ValidationError(std::string(kSeedEnvVar) +
                          " must be an unsigned integer, got '" + env + "'");
  }
  return v;
}

Json RunConfig::to_json() const {
  Json fit_j{{"l1_weight", fit.l1_weight},
             {"max_iters", fit.max_iters},
             {"tol", fit.tol},
             {"backtrack_factor", fit.backtrack_factor},
             {"diagonal_only", fit.diagonal_only}};
  fit_j["max_nonzeros"] =
      fit.max_nonzeros ? Json(*fit.max_nonzeros) : Json(nullptr);
  Json analogy_j{{"lambda1", analogy.lambda1},
                 {"lambda2", analogy.lambda2},
                 {"alpha", analogy.alpha},
                 {"k", analogy.k},
                 {"use_fidelity", analogy.use_fidelity}};
  Json j{{"command", command},
         {"seed", seed},
         {"bias", bias},
         {"mode", mode},
         {"fit", std::move(fit_j)},
         {"analogy", std::move(analogy_j)},
         {"oracle", oracle},
         {"phi", phi},
         {"inputs", inputs},
         {"outputs", outputs},
         {"options", options},
         {"strict", strict}};
  j["neighborhood_size"] =
      neighborhood_size ? Json(*neighborhood_size) : Json(nullptr);
  j["kernel_sigma_sq"] = kernel_sigma_sq ? Json(*kernel_sigma_sq) : Json(nullptr);
  return j;
}

RunConfig RunConfig::from_json(const Json& j) {
  try {
    RunConfig c;
    c.command = j.at("command").get<std::string>();
    c.seed = j.at("seed").get<std::uint64_t>();
    if (!j.at("neighborhood_size").is_null()) {
      c.neighborhood_size = j.at("neighborhood_size").get<std::size_t>();
    }
    if (!j.at("kernel_sigma_sq").is_null()) {
      c.kernel_sigma_sq = j.at("kernel_sigma_sq").get<double>();
    }
    c.bias = j.at("bias").get<double>();
    c.mode = j.at("mode").get<std::string>();
    const Json& f = j.at("fit");
    c.fit.l1_weight = f.at("l1_weight").get<double>();
    c.fit.max_iters = f.at("max_iters").get<std::size_t>();
    c.fit.tol = f.at("tol").get<double>();
    c.fit.backtrack_factor = f.at("backtrack_factor").get<double>();
    c.fit.diagonal_only = f.at("diagonal_only").get<bool>();
    if (!f.at("max_nonzeros").is_null()) {
      c.fit.max_nonzeros = f.at("max_nonzeros").get<std::size_t>();
    }
    const Json& a = j.at("analogy");
    c.analogy.lambda1 = a.at("lambda1").get<double>();
    c.analogy.lambda2 = a.at("lambda2").get<double>();
    c.analogy.alpha = a.at("alpha").get<double>();
    c.analogy.k = a.at("k").get<std::size_t>();
    c.analogy.use_fidelity = a.at("use_fidelity").get<bool>();
    c.oracle = j.at("oracle").get<std::string>();
    c.phi = j.at("phi").get<std::string>();
    c.inputs = j.at("inputs").get<std::map<std::string, std::string>>();
    c.outputs = j.at("outputs").get<std::map<std::string, std::string>>();
    c.options = j.at("options").get<std::map<std::string, std::string>>();
    c.strict = j.at("strict").get<bool>();
    return c;
  } catch (const Json::exception& e) {
    throw ValidationError(std::string("malformed run config: ") + e.what());
  }
}

bool operator==(const RunConfig& a, const RunConfig& b) {
  auto fit_eq = [](const FitConfig& x, const FitConfig& y) {
    return x.l1_weight == y.l1_weight && x.max_nonzeros == y.max_nonzeros &&
           x.max_iters == y.max_iters && x.tol == y.tol &&
           x.backtrack_factor == y.backtrack_factor &&
           x.diagonal_only == y.diagonal_only;
  };
  auto analogy_eq = [](const AnalogyConfig& x, const AnalogyConfig& y) {
    return x.lambda1 == y.lambda1 && x.lambda2 == y.lambda2 &&
           x.alpha == y.alpha && x.k == y.k && x.use_fidelity == y.use_fidelity;
  };
  return a.command == b.command && a.seed == b.seed &&
         a.neighborhood_size == b.neighborhood_size &&
         a.kernel_sigma_sq == b.kernel_sigma_sq && a.bias == b.bias &&
         a.mode == b.mode && fit_eq(a.fit, b.fit) &&
         analogy_eq(a.analogy, b.analogy) && a.oracle == b.oracle &&
         a.phi == b.phi && a.inputs == b.inputs && a.outputs == b.outputs &&
         a.options == b.options && a.strict == b.strict;
}

}  // namespace simexplain
