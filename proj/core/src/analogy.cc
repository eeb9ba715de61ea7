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

#include "simexplain/analogy.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "simexplain/errors.h"

namespace simexplain {

void AnalogyConfig::validate() const {
  auto ok = [](double v) { return std::isfinite(v) && v >= 0.0; };
  if (!ok(lambda1)) throw ValidationError("lambda1 must be finite and >= 0");
  if (!ok(lambda2)) throw ValidationError("lambda2 must be finite and >= 0");
  if (!ok(alpha)) throw ValidationError("alpha must be finite and >= 0");
  if (k == 0) throw ValidationError("k must be >= 1");
}

AnalogyConfig AnalogyConfig::defaults_for(InstanceKind kind) {
  AnalogyConfig cfg;
  cfg.lambda1 = kind == InstanceKind::kTokens ? kTokenLambda1 : kTabularLambda1;
  return cfg;
}

double direction_distance(const Eigen::VectorXd& dz, const Eigen::VectorXd& dx) {
  if (dz.size() != dx.size()) {
    throw ValidationError("direction vectors differ in dimension");
  }
  const double nz = dz.norm();
  const double nx = dx.norm();
  if (nz == 0.0 || nx == 0.0) {
    throw ValidationError("zero direction vector");
  }
  double c = dz.dot(dx) / (nz * nx);
  c = std::clamp(c, -1.0, 1.0);
  return 1.0 - c;
}

Eigen::VectorXd pair_direction(const InstancePair& pair, const Embedding& phi) {
  Eigen::VectorXd a = phi.embed(pair.left);
  Eigen::VectorXd b = phi.embed(pair.right);
  if (a.size() != b.size()) {
    throw ValidationError("embedding dimensions differ within a pair");
  }
  return b - a;
}

double closeness(double direction, double alpha, double di_z, double di_x) {
  const double diff = di_z - di_x;
  return direction + alpha * diff * diff;
}

double delta_min(const InstancePair& zi, const InstancePair& zj,
                 DistanceOracle& oracle) {
  const InstancePair cross[4] = {{zi.left, zj.left},
                                 {zi.right, zj.right},
                                 {zi.left, zj.right},
                                 {zi.right, zj.left}};
  std::vector<double> d = oracle.distances(cross);
  if (d.size() != 4) throw OracleError("oracle returned the wrong count");
  return std::min(d[0] + d[1], d[2] + d[3]);
}

double AnalogyTarget::delta_i() const {
  if (!report) throw ValidationError("target has no feature explanation");
  return predict(*report, pair);
}

AnalogyTarget make_target(const InstancePair& pair, DistanceOracle& oracle,
                          const Embedding& phi,
                          std::optional<ExplanationReport> report) {
  AnalogyTarget t;
  t.pair = pair;
  t.bb = oracle(pair);
  t.direction = pair_direction(pair, phi);
  if (t.direction.norm() == 0.0) {
    throw ValidationError("explained pair has a zero direction vector");
  }
  t.report = std::move(report);
  return t;
}

CandidatePool build_pool(std::vector<InstancePair> pairs, DistanceOracle& oracle,
                         const Embedding& phi) {
  CandidatePool pool;
  pool.bb = evaluate_all(oracle, pairs);
  pool.directions.reserve(pairs.size());
  for (const InstancePair& p : pairs) {
    Eigen::VectorXd d = pair_direction(p, phi);
    if (d.norm() == 0.0) {
      pool.directions.emplace_back(std::nullopt);
    } else {
      pool.directions.emplace_back(std::move(d));
    }
  }
  pool.pairs = std::move(pairs);
  return pool;
}

double DeltaMinCache::get(std::size_t i, std::size_t j) {
  if (i > j) std::swap(i, j);
  const std::uint64_t key = (static_cast<std::uint64_t>(i) << 32) | j;
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = table_.find(key);
    if (it != table_.end()) return it->second;
  }
  const double v = delta_min(pool_.pairs.at(i), pool_.pairs.at(j), oracle_);
  std::lock_guard<std::mutex> lock(mu_);
  table_.emplace(key, v);
  return v;
}

std::size_t DeltaMinCache::size() const {
  std::lock_guard<std::mutex> lock(mu_);
  return table_.size();
}

CandidateTerms candidate_terms(const CandidatePool& pool, std::size_t index,
                               const AnalogyTarget& target,
                               const AnalogyConfig& cfg) {
  if (index >= pool.size()) throw ValidationError("pool index out of range");
  const auto& dir = pool.directions[index];
  if (!dir) throw ValidationError("candidate has a zero direction vector");
  CandidateTerms t;
  const double gap = pool.bb[index] - target.bb;
  t.fidelity = gap * gap;
  t.direction = direction_distance(*dir, target.direction);
  double di_z = 0.0;
  double di_x = 0.0;
  if (cfg.alpha > 0.0) {
    if (!target.report) {
      throw ValidationError("alpha > 0 requires a feature explanation of the target");
    }
    di_z = predict(*target.report, pool.pairs[index]);
    di_x = target.delta_i();
  }
  t.closeness = closeness(t.direction, cfg.alpha, di_z, di_x);
  return t;
}

double objective(std::span<const std::size_t> set, const CandidatePool& pool,
                 const AnalogyTarget& target, const AnalogyConfig& cfg,
                 DeltaMinCache& cache) {
  double fid = 0.0;
  double close = 0.0;
  for (std::size_t i : set) {
    CandidateTerms t = candidate_terms(pool, i, target, cfg);
    fid += t.fidelity;
    close += t.closeness;
  }
  double div = 0.0;
  if (cfg.lambda2 != 0.0) {
    for (std::size_t a = 0; a < set.size(); ++a) {
      for (std::size_t b = a; b < set.size(); ++b) {
        const double m = cache.get(set[a], set[b]);
        div += m * m;
      }
    }
  }
  return (cfg.use_fidelity ? fid : 0.0) + cfg.lambda1 * close - cfg.lambda2 * div;
}

std::vector<std::size_t> AnalogySet::indices() const {
  std::vector<std::size_t> out;
  out.reserve(items.size());
  for (const auto& it : items) out.push_back(it.pool_index);
  return out;
}

std::vector<double> AnalogySet::bb_values() const {
  std::vector<double> out;
  out.reserve(items.size());
  for (const auto& it : items) out.push_back(it.bb);
  return out;
}

AnalogySet AnalogySet::prefix(std::size_t k) const {
  if (k == 0 || k > items.size()) {
    throw ValidationError("prefix length out of range");
  }
  AnalogySet out = *this;
  out.items.resize(k);
  out.config.k = k;
  out.objective = 0.0;
  for (const auto& it : out.items) out.objective += it.terms.marginal;
  return out;
}

namespace {

// Valid candidates in index order; zero-direction ones are recorded.
std::vector<std::size_t> usable_candidates(const CandidatePool& pool,
                                           AnalogySet& set,
                                           std::span<const std::size_t> exclude) {
  std::vector<bool> banned(pool.size(), false);
  for (std::size_t i : exclude) {
    if (i < pool.size()) banned[i] = true;
  }
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    if (banned[i]) continue;
    if (pool.directions[i]) {
      out.push_back(i);
    } else {
      set.skipped.push_back(i);
    }
  }
  if (!set.skipped.empty()) {
    set.warnings.push_back("skipped " + std::to_string(set.skipped.size()) +
                           " candidate(s) with a zero direction vector");
  }
  return out;
}

void check_pool(const CandidatePool& pool, const AnalogyTarget& target) {
  if (pool.bb.size() != pool.size() || pool.directions.size() != pool.size()) {
    throw ValidationError("candidate pool caches are inconsistent");
  }
  if (target.direction.size() == 0 || target.direction.norm() == 0.0) {
    throw ValidationError("explained pair has a zero direction vector");
  }
}

}  // namespace

AnalogySet greedy_select(const CandidatePool& pool, const AnalogyTarget& target,
                         const AnalogyConfig& cfg, DeltaMinCache& cache,
                         std::span<const std::size_t> exclude) {
  cfg.validate();
  check_pool(pool, target);
  AnalogySet set;
  set.method = "abe";
  set.config = cfg;
  set.target_bb = target.bb;
  std::vector<std::size_t> cand = usable_candidates(pool, set, exclude);
  if (cand.size() < cfg.k) {
    throw ValidationError("pool exhausted: " + std::to_string(cand.size()) +
                          " usable candidates for k = " + std::to_string(cfg.k));
  }

  const std::size_t n = cand.size();
  std::vector<CandidateTerms> terms(n);
  std::vector<double> base(n);
  std::vector<double> self(n, 0.0);
  std::vector<double> credit(n, 0.0);  // sum over chosen b of delta_min^2
  for (std::size_t c = 0; c < n; ++c) {
    terms[c] = candidate_terms(pool, cand[c], target, cfg);
    if (cfg.lambda2 != 0.0) {
      const double m = cache.get(cand[c], cand[c]);
      self[c] = m * m;
    }
    base[c] = (cfg.use_fidelity ? terms[c].fidelity : 0.0) +
              cfg.lambda1 * terms[c].closeness - cfg.lambda2 * self[c];
  }

  std::vector<bool> taken(n, false);
  for (std::size_t step = 0; step < cfg.k; ++step) {
    std::size_t best = n;
    double best_val = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < n; ++c) {
      if (taken[c]) continue;
      const double v = base[c] - cfg.lambda2 * credit[c];
      if (best == n || v < best_val) {
        best = c;
        best_val = v;
      }
    }
    taken[best] = true;
    SelectedAnalogy item;
    item.pool_index = cand[best];
    item.pair = pool.pairs[cand[best]];
    item.bb = pool.bb[cand[best]];
    item.terms.fidelity = terms[best].fidelity;
    item.terms.direction = terms[best].direction;
    item.terms.closeness = terms[best].closeness;
    item.terms.diversity = credit[best];
    item.terms.self_diversity = self[best];
    item.terms.marginal = best_val;
    set.objective += best_val;
    set.items.push_back(std::move(item));

    if (cfg.lambda2 != 0.0 && step + 1 < cfg.k) {
      for (std::size_t c = 0; c < n; ++c) {
        if (taken[c]) continue;
        const double m = cache.get(cand[c], cand[best]);
        credit[c] += m * m;
      }
    }
  }
  return set;
}

AnalogySet greedy_select(const CandidatePool& pool, const AnalogyTarget& target,
                         DistanceOracle& oracle, const AnalogyConfig& cfg) {
  DeltaMinCache cache(pool, oracle);
  return greedy_select(pool, target, cfg, cache);
}

std::string_view to_string(AblatedTerm term) {
  switch (term) {
    case AblatedTerm::kNone:
      return "none";
    case AblatedTerm::kFidelity:
      return "fidelity";
    case AblatedTerm::kCloseness:
      return "closeness";
    case AblatedTerm::kDiversity:
      return "diversity";
  }
  return "none";
}

AblatedTerm ablated_term_from_string(std::string_view name) {
  if (name == "none") return AblatedTerm::kNone;
  if (name == "fidelity") return AblatedTerm::kFidelity;
  if (name == "closeness") return AblatedTerm::kCloseness;
  if (name == "diversity") return AblatedTerm::kDiversity;
  throw ValidationError("unknown ablation term: " + std::string(name) +
                        " (expected fidelity, closeness or diversity)");
}

AnalogySet ablate(const CandidatePool& pool, const AnalogyTarget& target,
                  const AnalogyConfig& cfg, DeltaMinCache& cache, AblatedTerm drop,
                  std::span<const std::size_t> exclude) {
  AnalogyConfig c = cfg;
  switch (drop) {
    case AblatedTerm::kNone:
      break;
    case AblatedTerm::kFidelity:
      c.use_fidelity = false;
      break;
    case AblatedTerm::kCloseness:
      c.lambda1 = 0.0;
      break;
    case AblatedTerm::kDiversity:
      c.lambda2 = 0.0;
      break;
  }
  AnalogySet set = greedy_select(pool, target, c, cache, exclude);
  if (drop != AblatedTerm::kNone) {
    set.method = "abe-no-" + std::string(to_string(drop));
  }
  return set;
}

AnalogySet ablate(const CandidatePool& pool, const AnalogyTarget& target,
                  DistanceOracle& oracle, const AnalogyConfig& cfg,
                  AblatedTerm drop) {
  DeltaMinCache cache(pool, oracle);
  return ablate(pool, target, cfg, cache, drop);
}

AnalogySet dirsim_select(const CandidatePool& pool, const AnalogyTarget& target,
                         std::size_t k, std::span<const std::size_t> exclude) {
  check_pool(pool, target);
  if (k == 0) throw ValidationError("k must be >= 1");
  AnalogySet set;
  set.method = "dirsim";
  set.config.k = k;
  set.config.lambda1 = 1.0;
  set.config.lambda2 = 0.0;
  set.config.alpha = 0.0;
  set.config.use_fidelity = false;
  set.target_bb = target.bb;
  std::vector<std::size_t> cand = usable_candidates(pool, set, exclude);
  if (cand.size() < k) {
    throw ValidationError("pool exhausted: " + std::to_string(cand.size()) +
                          " usable candidates for k = " + std::to_string(k));
  }
  std::vector<std::pair<double, std::size_t>> scored;
  scored.reserve(cand.size());
  for (std::size_t i : cand) {
    scored.emplace_back(direction_distance(*pool.directions[i], target.direction), i);
  }
  std::stable_sort(scored.begin(), scored.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  for (std::size_t r = 0; r < k; ++r) {
    const auto [d, i] = scored[r];
    SelectedAnalogy item;
    item.pool_index = i;
    item.pair = pool.pairs[i];
    item.bb = pool.bb[i];
    const double gap = item.bb - target.bb;
    item.terms.fidelity = gap * gap;
    item.terms.direction = d;
    item.terms.closeness = d;
    item.terms.marginal = d;
    set.objective += d;
    set.items.push_back(std::move(item));
  }
  return set;
}

Json analogy_config_to_json(const AnalogyConfig& cfg) {
  return Json{{"lambda1", round_number(cfg.lambda1)},
              {"lambda2", round_number(cfg.lambda2)},
              {"alpha", round_number(cfg.alpha)},
              {"k", cfg.k},
              {"use_fidelity", cfg.use_fidelity}};
}

AnalogyConfig analogy_config_from_json(const Json& j) {
  try {
    AnalogyConfig cfg;
    cfg.lambda1 = j.at("lambda1").get<double>();
    cfg.lambda2 = j.at("lambda2").get<double>();
    cfg.alpha = j.at("alpha").get<double>();
    cfg.k = j.at("k").get<std::size_t>();
    cfg.use_fidelity = j.value("use_fidelity", true);
    cfg.validate();
    return cfg;
  } catch (const Json::exception& e) {
    throw ValidationError(std::string("malformed analogy config: ") + e.what());
  }
}

Json analogy_set_to_json(const AnalogySet& set) {
  Json items = Json::array();
  for (std::size_t r = 0; r < set.items.size(); ++r) {
    const SelectedAnalogy& it = set.items[r];
    items.push_back({{"rank", r + 1},
                     {"pool_index", it.pool_index},
                     {"pair", pair_to_json(it.pair)},
                     {"bb_distance", round_number(it.bb)},
                     {"terms",
                      {{"fidelity", round_number(it.terms.fidelity)},
                       {"direction", round_number(it.terms.direction)},
                       {"closeness", round_number(it.terms.closeness)},
                       {"diversity", round_number(it.terms.diversity)},
                       {"self_diversity", round_number(it.terms.self_diversity)},
                       {"marginal", round_number(it.terms.marginal)}}}});
  }
  return Json{{"method", set.method},
              {"analogies", std::move(items)},
              {"objective", round_number(set.objective)},
              {"target_bb_distance", round_number(set.target_bb)},
              {"config", analogy_config_to_json(set.config)},
              {"skipped", set.skipped},
              {"warnings", set.warnings},
              {"toolkit_version", kToolkitVersion}};
}

AnalogySet analogy_set_from_json(const Json& j) {
  try {
    AnalogySet set;
    set.method = j.at("method").get<std::string>();
    set.objective = j.at("objective").get<double>();
    set.target_bb = j.at("target_bb_distance").get<double>();
    set.config = analogy_config_from_json(j.at("config"));
    set.skipped = j.at("skipped").get<std::vector<std::size_t>>();
    set.warnings = j.at("warnings").get<std::vector<std::string>>();
    for (const Json& it : j.at("analogies")) {
      SelectedAnalogy a;
      a.pool_index = it.at("pool_index").get<std::size_t>();
      a.pair = pair_from_json(it.at("pair"));
      a.bb = it.at("bb_distance").get<double>();
      const Json& t = it.at("terms");
      a.terms.fidelity = t.at("fidelity").get<double>();
      a.terms.direction = t.at("direction").get<double>();
      a.terms.closeness = t.at("closeness").get<double>();
      a.terms.diversity = t.at("diversity").get<double>();
      a.terms.self_diversity = t.at("self_diversity").get<double>();
      a.terms.marginal = t.at("marginal").get<double>();
      set.items.push_back(std::move(a));
    }
    return set;
  } catch (const Json::exception& e) {
    throw ValidationError(std::string("malformed analogy set: ") + e.what());
  }
}

}  // namespace simexplain
