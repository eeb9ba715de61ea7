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

// simexplain: command-line front end.
//
//   simexplain explain-features  --pairs p.csv --oracle mahalanobis:a.json --out r.json
//   simexplain explain-analogies --pairs p.csv --pool pool.csv --oracle ... --out a.json
//   simexplain ablate            --pairs p.csv --drop diversity --oracle ... --out b.json
//   simexplain evaluate          --pairs p.csv --oracle ... --out results.csv
//   simexplain gen-synthetic     --out-dir data/ --dim 5 --seed 3
//
// Exit status: 0 ok, 2 invalid input, 3 oracle failure, 4 non-convergence
// under --strict.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "simexplain/analogy.h"
#include "simexplain/baselines.h"
#include "simexplain/dataset_io.h"
#include "simexplain/errors.h"
#include "simexplain/evaluation.h"
#include "simexplain/feature_explainer.h"
#include "simexplain/oracle_factory.h"
#include "simexplain/run_config.h"
#include "simexplain/serialization.h"
#include "simexplain/synthetic.h"

namespace fs = std::filesystem;
using namespace simexplain;

namespace {

// Options shared by the commands that read pairs and query a black box.
struct CommonOptions {
  std::uint64_t seed = 0;
  std::string pairs;
  std::string training;
  std::string oracle;
  bool oracle_symmetric = false;
  std::size_t batch_size = 256;
  std::string out;
  std::size_t neighborhood_size = 0;
  double kernel_sigma_sq = 0.0;
  double bias = kDefaultBias;
  double l1 = kDefaultL1Weight;
  std::size_t max_nonzeros = 0;
  std::size_t max_iters = 2000;
  double tol = 1e-8;
  std::size_t threads = 1;
  bool strict = false;
  std::string phi = "identity";

  CLI::Option* seed_opt = nullptr;
  CLI::Option* nbhd_opt = nullptr;
  CLI::Option* sigma_opt = nullptr;
  CLI::Option* nonzeros_opt = nullptr;
  CLI::Option* symmetric_opt = nullptr;
};

struct AnalogyOptions {
  std::string pool;
  std::size_t k = 5;
  double lambda1 = 0.0;
  double lambda2 = kDefaultLambda2;
  double alpha = 0.0;
  bool no_fidelity = false;
  std::string method = "abe";
  std::string drop = "diversity";
  std::optional<std::size_t> index;

  CLI::Option* lambda1_opt = nullptr;
};

void add_common(CLI::App* cmd, CommonOptions& o, bool needs_pairs = true) {
  o.seed_opt = cmd->add_option("--seed", o.seed,
                               "Random seed (default: $" + std::string(kSeedEnvVar) +
                                   " or 0)");
  auto* p = cmd->add_option("--pairs", o.pairs, "Pair file (CSV or JSONL)");
  if (needs_pairs) p->required()->check(CLI::ExistingFile);
  cmd->add_option("--training", o.training,
                  "Instance CSV for feature scales and the categorical model")
      ->check(CLI::ExistingFile);
  cmd->add_option("--oracle", o.oracle,
                  "Black box: mahalanobis:<file> | cosine-embedding:<file> | "
                  "command:<cmd> | table:<file>")
      ->required();
  o.symmetric_opt =
      cmd->add_flag("--oracle-symmetric", o.oracle_symmetric,
                    "Declare the black box symmetric");
  cmd->add_option("--batch-size", o.batch_size, "Pairs per external oracle request")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--out", o.out, "Output file")->required();
  o.nbhd_opt = cmd->add_option("--neighborhood-size", o.neighborhood_size,
                               "Perturbed pairs per explanation")
                   ->check(CLI::PositiveNumber);
  o.sigma_opt = cmd->add_option("--kernel-sigma-sq", o.kernel_sigma_sq,
                                "Kernel width (default 0.5625 * features)")
                    ->check(CLI::PositiveNumber);
  cmd->add_option("--bias", o.bias, "Categorical resampling bias")->check(CLI::Range(0.0, 1.0));
  cmd->add_option("--l1", o.l1, "l1 weight of the Mahalanobis fit")
      ->check(CLI::NonNegativeNumber);
  o.nonzeros_opt = cmd->add_option("--max-nonzeros", o.max_nonzeros,
                                   "Diagonal fit support size (0: unlimited)");
  cmd->add_option("--max-iters", o.max_iters, "Solver iteration cap")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--tol", o.tol, "Solver relative tolerance")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--threads", o.threads, "Worker threads")->check(CLI::PositiveNumber);
  cmd->add_flag("--strict", o.strict, "Fail with status 4 when a fit does not converge");
  cmd->add_option("--phi", o.phi,
                  "Embedding for analogy directions: identity | embedding:<file>");
}

void add_analogy(CLI::App* cmd, AnalogyOptions& a) {
  cmd->add_option("--pool", a.pool, "Candidate pair file (default: --pairs)")
      ->check(CLI::ExistingFile);
  cmd->add_option("-k,--k", a.k, "Analogies per explanation")->check(CLI::PositiveNumber);
  a.lambda1_opt = cmd->add_option("--lambda1", a.lambda1,
                                  "Closeness weight (default 0.5 text, 1 tabular)")
                      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--lambda2", a.lambda2, "Diversity weight")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--alpha", a.alpha, "Feature-distance weight in the closeness term")
      ->check(CLI::NonNegativeNumber);
  cmd->add_flag("--no-fidelity", a.no_fidelity, "Drop the fidelity term");
}

void add_index(CLI::App* cmd, AnalogyOptions& a) {
  cmd->add_option("--index", a.index, "Explain only this pair (0-based)");
}

// Data and black box loaded from the common options.
struct Session {
  RunConfig run;
  Schema schema;
  std::vector<InstancePair> pairs;
  std::vector<Instance> training;
  std::shared_ptr<CachingOracle> oracle;
  std::vector<std::string> warnings;
};

FitConfig fit_config(const CommonOptions& o) {
  FitConfig f;
  f.l1_weight = o.l1;
  f.max_iters = o.max_iters;
  f.tol = o.tol;
  if (o.nonzeros_opt->count() > 0) {
    f.max_nonzeros =
        o.max_nonzeros == 0 ? std::numeric_limits<std::size_t>::max() : o.max_nonzeros;
  }
  f.validate();
  return f;
}

std::uint64_t resolve_seed(const CommonOptions& o) {
  return o.seed_opt->count() > 0 ? o.seed : default_seed();
}

Session open_session(const std::string& command, const CommonOptions& o) {
  Session s;
  PairFile pf = load_pairs(o.pairs);
  s.schema = pf.schema;
  s.pairs = std::move(pf.pairs);
  s.warnings = std::move(pf.warnings);
  if (!o.training.empty()) {
    s.training = load_instances(o.training, s.schema);
  } else if (s.schema.kind != InstanceKind::kTokens) {
    for (const auto& p : s.pairs) {
      s.training.push_back(p.left);
      s.training.push_back(p.right);
    }
    s.warnings.push_back("no --training file; feature scales come from the pairs");
  }

  OracleSpec spec = OracleSpec::parse(o.oracle);
  if (o.symmetric_opt->count() > 0) spec.symmetric = o.oracle_symmetric;
  spec.batch_size = o.batch_size;
  s.oracle = make_oracle(spec, s.pairs.empty() ? nullptr : &s.pairs.front());

  RunConfig& r = s.run;
  r.command = command;
  r.seed = resolve_seed(o);
  if (o.nbhd_opt->count() > 0) r.neighborhood_size = o.neighborhood_size;
  if (o.sigma_opt->count() > 0) r.kernel_sigma_sq = o.kernel_sigma_sq;
  r.bias = o.bias;
  r.fit = fit_config(o);
  r.oracle = spec.to_string();
  r.phi = o.phi;
  r.inputs["pairs"] = o.pairs;
  if (!o.training.empty()) r.inputs["training"] = o.training;
  r.outputs["out"] = o.out;
  r.options["threads"] = std::to_string(o.threads);
  r.strict = o.strict;
  return s;
}

std::shared_ptr<const Embedding> make_phi(const std::string& phi, const Schema& schema,
                                          std::span<const InstancePair> all_pairs) {
  if (phi == "identity") {
    return std::make_shared<IdentityEmbedding>(
        default_neighbor_rule(all_pairs, schema).representation);
  }
  constexpr std::string_view kPrefix = "embedding:";
  if (phi.rfind(kPrefix, 0) == 0) {
    return std::make_shared<LookupEmbedding>(load_embeddings(phi.substr(kPrefix.size())));
  }
  throw ValidationError("--phi must be 'identity' or 'embedding:<file>', got '" + phi +
                        "'");
}

Json warnings_json(const std::vector<std::string>& w) { return Json(w); }

void report_warnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
}

Json document(const Session& s, const char* key, Json payload) {
  Json doc;
  doc["command"] = s.run.command;
  doc["run_config"] = s.run.to_json();
  doc["toolkit_version"] = kToolkitVersion;
  doc["warnings"] = warnings_json(s.warnings);
  doc[key] = std::move(payload);
  return doc;
}

// Finishes a command: writes the document and applies --strict.
int finish(const Session& s, const Json& doc, const std::string& out,
           std::size_t not_converged) {
  write_json_file(doc, out);
  report_warnings(s.warnings);
  if (not_converged > 0) {
    const std::string msg =
        std::to_string(not_converged) + " fit(s) stopped before converging";
    if (s.run.strict) throw NonConvergenceError(msg);
    std::cerr << "warning: " << msg << "\n";
  }
  return 0;
}

// All loaded pairs, or only the one named by --index.
std::vector<InstancePair> select_targets(Session& s, std::optional<std::size_t> index) {
  if (!index) return s.pairs;
  if (*index >= s.pairs.size()) {
    throw ValidationError("--index " + std::to_string(*index) + " out of range (" +
                          std::to_string(s.pairs.size()) + " pairs)");
  }
  s.run.options["index"] = std::to_string(*index);
  return {s.pairs[*index]};
}

int run_explain_features(const CommonOptions& o, const std::string& mode_name,
                         std::optional<std::size_t> index,
                         const std::string& fit_pairs) {
  Session s = open_session("explain-features", o);
  s.run.mode = mode_name;
  if (!fit_pairs.empty()) s.run.inputs["fit_pairs"] = fit_pairs;
  std::vector<InstancePair> targets = select_targets(s, index);

  std::vector<Json> out(targets.size());
  std::size_t not_converged = 0;

  if (mode_name == "global") {
    std::vector<InstancePair> train = s.pairs;
    if (!fit_pairs.empty()) train = load_pairs(fit_pairs, &s.schema).pairs;
    NeighborRule rule = default_neighbor_rule(train, s.schema);
    FeatureSelector selector;
    if (rule.representation.dimension() > kGlobalFeatureCap) {
      selector = nonzero_count_selector();
    }
    ExplanationReport global =
        fit_global(train, rule.representation, *s.oracle, s.run.fit, selector);
    global.seed = s.run.seed;
    if (!global.converged) ++not_converged;
    for (const auto& w : global.warnings) s.warnings.push_back(w);
    for (std::size_t i = 0; i < targets.size(); ++i) {
      ExplanationReport r = global;
      attach_pair(r, targets[i], (*s.oracle)(targets[i]));
      out[i] = report_to_json(r);
    }
    Json payload = Json::array();
    for (auto& j : out) payload.push_back(std::move(j));
    return finish(s, document(s, "explanations", std::move(payload)), o.out,
                  not_converged);
  }

  Perturber perturber = make_perturber(s.schema, s.training, s.run.bias);
  SurrogateExplainer::Options opts;
  opts.neighborhood_size = s.run.neighborhood_size;
  opts.kernel_sigma_sq = s.run.kernel_sigma_sq;
  opts.fit = s.run.fit;
  opts.seed = s.run.seed;
  SurrogateExplainer ex(perturber, *s.oracle, opts);

  std::vector<char> converged(targets.size(), 1);
  parallel_for(targets.size(), o.threads, [&](std::size_t i) {
    Neighborhood nbhd = ex.neighborhood_for(targets[i]);
    if (mode_name == "full" || mode_name == "diag") {
      FitConfig cfg = s.run.fit;
      ExplanationReport r;
      if (mode_name == "full") {
        r = fit_full(nbhd, *s.oracle, cfg);
      } else {
        if (!cfg.max_nonzeros) {
          cfg.max_nonzeros = FitConfig::diagonal_defaults(s.schema.kind).max_nonzeros;
        }
        r = fit_diag(nbhd, *s.oracle, cfg);
      }
      converged[i] = r.converged ? 1 : 0;
      out[i] = report_to_json(r);
    } else if (mode_name == "lime") {
      out[i] = linear_to_json(fit_concat_linear(nbhd, *s.oracle));
    } else {
      out[i] = bilinear_to_json(fit_bilinear(nbhd, *s.oracle));
    }
  });
  for (char c : converged) not_converged += c ? 0 : 1;
  Json payload = Json::array();
  for (auto& j : out) payload.push_back(std::move(j));
  return finish(s, document(s, "explanations", std::move(payload)), o.out,
                not_converged);
}

struct AnalogyContext {
  std::vector<InstancePair> targets;
  std::shared_ptr<const CandidatePool> pool;
  std::shared_ptr<const Embedding> phi;
  AnalogyConfig cfg;
  std::map<std::string, std::vector<std::size_t>> pool_index;
};

AnalogyContext open_analogies(Session& s, const CommonOptions& o,
                              const AnalogyOptions& a) {
  AnalogyContext c;
  c.targets = select_targets(s, a.index);
  std::vector<InstancePair> pool_pairs = s.pairs;
  if (!a.pool.empty()) {
    PairFile pf = load_pairs(a.pool, &s.schema);
    pool_pairs = std::move(pf.pairs);
    for (auto& w : pf.warnings) s.warnings.push_back(std::move(w));
    s.run.inputs["pool"] = a.pool;
  }
  std::vector<InstancePair> all = c.targets;
  all.insert(all.end(), pool_pairs.begin(), pool_pairs.end());
  c.phi = make_phi(o.phi, s.schema, all);
  for (std::size_t i = 0; i < pool_pairs.size(); ++i) {
    c.pool_index[pool_pairs[i].key()].push_back(i);
  }
  c.pool = std::make_shared<const CandidatePool>(
      build_pool(std::move(pool_pairs), *s.oracle, *c.phi));

  c.cfg = AnalogyConfig::defaults_for(s.schema.kind);
  if (a.lambda1_opt->count() > 0) c.cfg.lambda1 = a.lambda1;
  c.cfg.lambda2 = a.lambda2;
  c.cfg.alpha = a.alpha;
  c.cfg.k = a.k;
  c.cfg.use_fidelity = !a.no_fidelity;
  c.cfg.validate();
  s.run.analogy = c.cfg;
  return c;
}

AnalogyTarget target_for(const Session& s, const AnalogyContext& c,
                         const InstancePair& pair, const Perturber* perturber) {
  std::optional<ExplanationReport> report;
  if (c.cfg.alpha > 0.0) {
    SurrogateExplainer::Options opts;
    opts.neighborhood_size = s.run.neighborhood_size;
    opts.kernel_sigma_sq = s.run.kernel_sigma_sq;
    opts.fit = s.run.fit;
    opts.seed = s.run.seed;
    SurrogateExplainer ex(*perturber, *s.oracle, opts);
    report = fit_full(ex.neighborhood_for(pair), *s.oracle, s.run.fit);
  }
  return make_target(pair, *s.oracle, *c.phi, std::move(report));
}

std::vector<std::size_t> exclusions(const AnalogyContext& c, const InstancePair& p) {
  auto it = c.pool_index.find(p.key());
  return it == c.pool_index.end() ? std::vector<std::size_t>{} : it->second;
}

int run_explain_analogies(const CommonOptions& o, const AnalogyOptions& a) {
  if (a.method != "abe" && a.method != "dirsim") {
    throw ValidationError("--method must be abe or dirsim");
  }
  Session s = open_session("explain-analogies", o);
  s.run.mode = a.method;
  AnalogyContext c = open_analogies(s, o, a);
  std::optional<Perturber> perturber;
  if (c.cfg.alpha > 0.0) perturber = make_perturber(s.schema, s.training, s.run.bias);

  DeltaMinCache cache(*c.pool, *s.oracle);
  Json payload = Json::array();
  std::size_t not_converged = 0;
  for (const auto& pair : c.targets) {
    AnalogyTarget t = target_for(s, c, pair, perturber ? &*perturber : nullptr);
    if (t.report && !t.report->converged) ++not_converged;
    std::vector<std::size_t> ex = exclusions(c, pair);
    AnalogySet set = a.method == "abe" ? greedy_select(*c.pool, t, c.cfg, cache, ex)
                                       : dirsim_select(*c.pool, t, c.cfg.k, ex);
    for (const auto& w : set.warnings) s.warnings.push_back(w);
    payload.push_back({{"target", pair_to_json(pair)},
                       {"bb_distance", round_number(t.bb)},
                       {"prediction", round_number(analogy_prediction(set))},
                       {"analogies", analogy_set_to_json(set)}});
  }
  s.run.options["oracle_evaluations"] = std::to_string(s.oracle->evaluations());
  return finish(s, document(s, "explanations", std::move(payload)), o.out,
                not_converged);
}

int run_ablate(const CommonOptions& o, const AnalogyOptions& a) {
  const AblatedTerm drop = ablated_term_from_string(a.drop);
  Session s = open_session("ablate", o);
  s.run.mode = std::string(to_string(drop));
  AnalogyContext c = open_analogies(s, o, a);
  std::optional<Perturber> perturber;
  if (c.cfg.alpha > 0.0) perturber = make_perturber(s.schema, s.training, s.run.bias);

  DeltaMinCache cache(*c.pool, *s.oracle);
  Json payload = Json::array();
  std::size_t not_converged = 0;
  for (const auto& pair : c.targets) {
    AnalogyTarget t = target_for(s, c, pair, perturber ? &*perturber : nullptr);
    if (t.report && !t.report->converged) ++not_converged;
    std::vector<std::size_t> ex = exclusions(c, pair);
    AnalogySet full = ablate(*c.pool, t, c.cfg, cache, AblatedTerm::kNone, ex);
    AnalogySet cut = ablate(*c.pool, t, c.cfg, cache, drop, ex);
    payload.push_back({{"target", pair_to_json(pair)},
                       {"bb_distance", round_number(t.bb)},
                       {"full", analogy_set_to_json(full)},
                       {"ablated", analogy_set_to_json(cut)},
                       {"same_selection", full.indices() == cut.indices()}});
  }
  return finish(s, document(s, "ablations", std::move(payload)), o.out, not_converged);
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

int run_evaluate(const CommonOptions& o, const AnalogyOptions& a,
                 const std::string& methods, std::size_t k_min, std::size_t k_max,
                 std::size_t folds, const std::string& report_path) {
  Session s = open_session("evaluate", o);
  EvalConfig cfg;
  if (!methods.empty()) cfg.methods = split_commas(methods);
  cfg.k_min = k_min;
  cfg.k_max = k_max;
  cfg.folds = folds;
  cfg.seed = s.run.seed;
  cfg.neighborhood_size = s.run.neighborhood_size;
  cfg.kernel_sigma_sq = s.run.kernel_sigma_sq;
  cfg.bias = s.run.bias;
  cfg.fit = s.run.fit;
  cfg.threads = o.threads;
  AnalogyConfig an = AnalogyConfig::defaults_for(s.schema.kind);
  if (a.lambda1_opt->count() > 0) an.lambda1 = a.lambda1;
  an.lambda2 = a.lambda2;
  an.k = k_max;
  an.use_fidelity = !a.no_fidelity;
  cfg.analogy = an;
  s.run.analogy = an;
  cfg.validate();

  std::string joined;
  for (const auto& m : cfg.methods) joined += (joined.empty() ? "" : ",") + m;
  s.run.options["methods"] = joined;
  s.run.options["k_min"] = std::to_string(k_min);
  s.run.options["k_max"] = std::to_string(k_max);
  s.run.options["folds"] = std::to_string(folds);
  const std::string sidecar = report_path.empty() ? o.out + ".run.json" : report_path;
  s.run.outputs["report"] = sidecar;

  EvalData data;
  data.schema = s.schema;
  data.pairs = s.pairs;
  data.training = s.training;
  data.oracle = s.oracle;
  if (o.phi != "identity") data.phi = make_phi(o.phi, s.schema, s.pairs);

  EvalResult res = run_evaluation(data, cfg);
  write_results_csv(o.out, res.rows);
  for (auto& w : res.warnings) s.warnings.push_back(std::move(w));

  Json summary = Json::array();
  for (const EvalRow& r : res.rows) {
    if (r.fold != "mean") continue;
    Json row{{"method", r.method}, {"metric", r.metric}, {"value", round_number(r.value)}};
    row["k"] = r.k ? Json(*r.k) : Json(nullptr);
    summary.push_back(std::move(row));
  }
  return finish(s, document(s, "summary", std::move(summary)), sidecar, 0);
}

int run_gen_synthetic(SyntheticConfig cfg, bool seed_given, const std::string& family,
                      const std::string& out_dir) {
  if (!seed_given) cfg.seed = default_seed();
  cfg.family = synthetic_family_from_string(family);
  cfg.validate();
  SyntheticDataset ds = make_synthetic(cfg);

  fs::create_directories(out_dir);
  const fs::path dir(out_dir);
  std::vector<double> bb = evaluate_all(*ds.oracle, ds.pairs);
  write_pairs_csv(dir / "pairs.csv", ds.schema, ds.pairs, bb);
  write_instances_csv(dir / "training.csv", ds.schema, ds.training);
  MahalanobisFile mf{PsdMatrix(ds.a_star), Representation::identity(ds.schema)};
  write_mahalanobis_file(mf, dir / "a_star.json");

  RunConfig run;
  run.command = "gen-synthetic";
  run.seed = cfg.seed;
  run.mode = std::string(to_string(cfg.family));
  run.outputs = {{"pairs", (dir / "pairs.csv").string()},
                 {"training", (dir / "training.csv").string()},
                 {"a_star", (dir / "a_star.json").string()}};
  run.options = {{"dim", std::to_string(cfg.dim)},
                 {"num_pairs", std::to_string(cfg.num_pairs)},
                 {"num_training", std::to_string(cfg.num_training)}};
  Json doc{{"command", run.command},
           {"run_config", run.to_json()},
           {"toolkit_version", kToolkitVersion},
           {"synthetic",
            {{"family", std::string(to_string(cfg.family))},
             {"dim", cfg.dim},
             {"num_pairs", cfg.num_pairs},
             {"num_training", cfg.num_training},
             {"pair_spread", cfg.pair_spread},
             {"wiggle", cfg.wiggle},
             {"seed", cfg.seed}}}};
  if (cfg.family == SyntheticFamily::kQuadratic) {
    doc["oracle"] = "mahalanobis:" + (dir / "a_star.json").string();
  }
  write_json_file(doc, dir / "run.json");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Local explanations for black-box similarity and distance models"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.set_version_flag("--version", std::string(kToolkitVersion));

  CommonOptions feat;
  std::string mode = "full";
  std::size_t index = 0;
  std::string fit_pairs;
  auto* explain_features =
      app.add_subcommand("explain-features", "Mahalanobis and baseline surrogates");
  add_common(explain_features, feat);
  explain_features->add_option("--mode", mode, "full | diag | global | lime | jslime")
      ->check(CLI::IsMember({"full", "diag", "global", "lime", "jslime"}));
  auto* index_opt =
      explain_features->add_option("--index", index, "Explain only this pair (0-based)");
  explain_features
      ->add_option("--fit-pairs", fit_pairs, "Training pairs for --mode global")
      ->check(CLI::ExistingFile);

  CommonOptions an_common;
  AnalogyOptions an;
  auto* explain_analogies =
      app.add_subcommand("explain-analogies", "Analogy-based explanations");
  add_common(explain_analogies, an_common);
  add_analogy(explain_analogies, an);
  add_index(explain_analogies, an);
  explain_analogies->add_option("--method", an.method, "abe | dirsim")
      ->check(CLI::IsMember({"abe", "dirsim"}));

  CommonOptions ab_common;
  AnalogyOptions ab;
  auto* ablate_cmd =
      app.add_subcommand("ablate", "Analogy selection with one objective term removed");
  add_common(ablate_cmd, ab_common);
  add_analogy(ablate_cmd, ab);
  add_index(ablate_cmd, ab);
  ablate_cmd->add_option("--drop", ab.drop, "fidelity | closeness | diversity")
      ->check(CLI::IsMember({"fidelity", "closeness", "diversity"}));

  CommonOptions ev_common;
  AnalogyOptions ev;
  std::string methods;
  std::size_t k_min = 1, k_max = 10, folds = 1;
  std::string report_path;
  auto* evaluate = app.add_subcommand("evaluate", "Fidelity benchmark over all methods");
  add_common(evaluate, ev_common);
  add_analogy(evaluate, ev);
  evaluate->add_option("--methods", methods,
                       "Comma list of fbfull,fbdiag,gfbfull,lime,jslime,abe,dirsim");
  evaluate->add_option("--k-min", k_min, "Smallest analogy count")
      ->check(CLI::PositiveNumber);
  evaluate->add_option("--k-max", k_max, "Largest analogy count")
      ->check(CLI::PositiveNumber);
  evaluate->add_option("--folds", folds, "Cross-validation folds")
      ->check(CLI::PositiveNumber);
  evaluate->add_option("--report", report_path,
                       "Run summary JSON (default: <out>.run.json)");

  SyntheticConfig syn;
  std::string family = "quadratic";
  std::string out_dir;
  auto* gen = app.add_subcommand("gen-synthetic", "Synthetic pairs with a known A*");
  auto* syn_seed = gen->add_option("--seed", syn.seed, "Random seed");
  gen->add_option("--family", family, "quadratic | smooth")
      ->check(CLI::IsMember({"quadratic", "smooth"}));
  gen->add_option("--dim", syn.dim, "Feature count")->check(CLI::PositiveNumber);
  gen->add_option("--num-pairs", syn.num_pairs, "Pairs to generate")
      ->check(CLI::PositiveNumber);
  gen->add_option("--num-training", syn.num_training, "Training instances")
      ->check(CLI::PositiveNumber);
  gen->add_option("--spread", syn.pair_spread, "Scale of right - left")
      ->check(CLI::PositiveNumber);
  gen->add_option("--wiggle", syn.wiggle, "Non-quadratic term (smooth family)")
      ->check(CLI::NonNegativeNumber);
  gen->add_option("--out-dir", out_dir, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : exit_code(ErrorKind::kValidation);
  }

  try {
    if (*explain_features) {
      std::optional<std::size_t> only;
      if (index_opt->count() > 0) only = index;
      return run_explain_features(feat, mode, only, fit_pairs);
    }
    if (*explain_analogies) return run_explain_analogies(an_common, an);
    if (*ablate_cmd) return run_ablate(ab_common, ab);
    if (*evaluate) {
      return run_evaluate(ev_common, ev, methods, k_min, k_max, folds, report_path);
    }
    if (*gen) return run_gen_synthetic(syn, syn_seed->count() > 0, family, out_dir);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
