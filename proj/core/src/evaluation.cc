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

#include "simexplain/evaluation.h"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstdio>
#include <exception>
#include <fstream>
#include <map>
#include <mutex>
#include <thread>
#include <tuple>

#include "simexplain/dataset_io.h"
#include "simexplain/errors.h"
#include "simexplain/random.h"

namespace simexplain {

std::string_view to_string(SurrogateMethod m) {
  switch (m) {
    case SurrogateMethod::kFbFull:
      return "fbfull";
    case SurrogateMethod::kFbDiag:
      return "fbdiag";
    case SurrogateMethod::kLime:
      return "lime";
    case SurrogateMethod::kJsLime:
      return "jslime";
  }
  return "fbfull";
}

std::size_t default_neighborhood_size(InstanceKind kind) {
  switch (kind) {
    case InstanceKind::kNumeric:
      return kNumericNeighborhood;
    case InstanceKind::kCategorical:
      return kCategoricalNeighborhood;
    case InstanceKind::kTokens:
      return kTokenNeighborhood;
  }
  return kNumericNeighborhood;
}

namespace {

class ReportModel : public LocalModel {
 public:
  explicit ReportModel(std::shared_ptr<const ExplanationReport> r)
      : report_(std::move(r)) {}
  double self_prediction() const override { return report_->predicted_distance; }
  double predict(const InstancePair& pair) const override {
    return simexplain::predict(*report_, pair);
  }

 private:
  std::shared_ptr<const ExplanationReport> report_;
};

class GlobalModel : public LocalModel {
 public:
  GlobalModel(std::shared_ptr<const ExplanationReport> r, InstancePair pair)
      : report_(std::move(r)), pair_(std::move(pair)) {}
  double self_prediction() const override {
    return simexplain::predict(*report_, pair_);
  }
  double predict(const InstancePair& pair) const override {
    return simexplain::predict(*report_, pair);
  }

 private:
  std::shared_ptr<const ExplanationReport> report_;
  InstancePair pair_;
};

class LinearModel : public LocalModel {
 public:
  explicit LinearModel(LinearSurrogate s) : s_(std::move(s)) {}
  double self_prediction() const override { return s_.predicted_distance; }
  double predict(const InstancePair& pair) const override { return s_.predict(pair); }

 private:
  LinearSurrogate s_;
};

class BilinearModel : public LocalModel {
 public:
  explicit BilinearModel(BilinearSurrogate s) : s_(std::move(s)) {}
  double self_prediction() const override { return s_.predicted_distance; }
  double predict(const InstancePair& pair) const override { return s_.predict(pair); }

 private:
  BilinearSurrogate s_;
};

class AnalogyModel : public LocalModel {
 public:
  AnalogyModel(InstancePair pair, double prediction)
      : pair_(std::move(pair)), prediction_(prediction) {}
  double self_prediction() const override { return prediction_; }
  double predict(const InstancePair& pair) const override {
    if (pair == pair_) return prediction_;
    throw UnsupportedMetricError(
        "analogy explanations do not transfer to other pairs");
  }

 private:
  InstancePair pair_;
  double prediction_;
};

}  // namespace

SurrogateExplainer::SurrogateExplainer(Perturber perturber, DistanceOracle& oracle,
                                       Options opts)
    : perturber_(std::move(perturber)), oracle_(oracle), opts_(std::move(opts)) {
  opts_.fit.validate();
  if (opts_.neighborhood_size && *opts_.neighborhood_size == 0) {
    throw ValidationError("neighborhood size must be >= 1");
  }
}

std::string SurrogateExplainer::name() const {
  return std::string(to_string(opts_.method));
}

std::uint64_t SurrogateExplainer::pair_seed(const InstancePair& pair) const {
  return derive_seed(opts_.seed, stable_hash(pair.key()));
}

Neighborhood SurrogateExplainer::neighborhood_for(const InstancePair& pair) const {
  const std::size_t n =
      opts_.neighborhood_size.value_or(default_neighborhood_size(perturber_.kind()));
  KernelConfig kernel = perturber_.default_kernel(pair);
  if (opts_.kernel_sigma_sq) kernel.sigma_sq = *opts_.kernel_sigma_sq;
  return build_neighborhood(pair, n, kernel, perturber_, pair_seed(pair), &oracle_);
}

std::unique_ptr<LocalModel> SurrogateExplainer::explain(const InstancePair& pair) {
  Neighborhood nbhd = neighborhood_for(pair);
  switch (opts_.method) {
    case SurrogateMethod::kFbFull:
      return std::make_unique<ReportModel>(
          std::make_shared<ExplanationReport>(fit_full(nbhd, oracle_, opts_.fit)));
    case SurrogateMethod::kFbDiag: {
      FitConfig cfg = opts_.fit;
      if (!cfg.max_nonzeros) {
        cfg.max_nonzeros = FitConfig::diagonal_defaults(perturber_.kind()).max_nonzeros;
      }
      return std::make_unique<ReportModel>(
          std::make_shared<ExplanationReport>(fit_diag(nbhd, oracle_, cfg)));
    }
    case SurrogateMethod::kLime:
      return std::make_unique<LinearModel>(fit_concat_linear(nbhd, oracle_));
    case SurrogateMethod::kJsLime:
      return std::make_unique<BilinearModel>(fit_bilinear(nbhd, oracle_));
  }
  throw ValidationError("unknown surrogate method");
}

GlobalExplainer::GlobalExplainer(std::span<const InstancePair> training,
                                 const Representation& rep, DistanceOracle& oracle,
                                 const FitConfig& cfg,
                                 const FeatureSelector& selector)
    : report_(std::make_shared<ExplanationReport>(
          fit_global(training, rep, oracle, cfg, selector))) {}

std::unique_ptr<LocalModel> GlobalExplainer::explain(const InstancePair& pair) {
  return std::make_unique<GlobalModel>(report_, pair);
}

AnalogyExplainer::AnalogyExplainer(std::shared_ptr<const CandidatePool> pool,
                                   DistanceOracle& oracle,
                                   std::shared_ptr<const Embedding> phi,
                                   AnalogyConfig cfg, Method method)
    : pool_(std::move(pool)),
      oracle_(oracle),
      phi_(std::move(phi)),
      cfg_(cfg),
      method_(method),
      cache_(*pool_, oracle_) {
  cfg_.validate();
  if (!phi_) throw ValidationError("analogy explainer needs an embedding");
  if (cfg_.alpha > 0.0) {
    throw ValidationError(
        "the analogy explainer in the evaluation harness runs with alpha = 0");
  }
}

std::string AnalogyExplainer::name() const {
  return method_ == Method::kAbE ? "abe" : "dirsim";
}

AnalogySet AnalogyExplainer::select(const InstancePair& pair,
                                    std::optional<std::size_t> k) {
  AnalogyTarget target = make_target(pair, oracle_, *phi_);
  std::vector<std::size_t> exclude;
  const std::string key = pair.key();
  for (std::size_t i = 0; i < pool_->size(); ++i) {
    if (pool_->pairs[i].key() == key) exclude.push_back(i);
  }
  AnalogyConfig cfg = cfg_;
  if (k) cfg.k = *k;
  if (method_ == Method::kDirSim) return dirsim_select(*pool_, target, cfg.k, exclude);
  return greedy_select(*pool_, target, cfg, cache_, exclude);
}

std::unique_ptr<LocalModel> AnalogyExplainer::explain(const InstancePair& pair) {
  return std::make_unique<AnalogyModel>(pair, analogy_prediction(select(pair)));
}

NeighborRule default_neighbor_rule(std::span<const InstancePair> pairs,
                                   const Schema& schema) {
  NeighborRule rule;
  std::size_t m = schema.num_features();
  switch (schema.kind) {
    case InstanceKind::kNumeric:
      rule.representation = Representation::identity(schema);
      break;
    case InstanceKind::kCategorical:
      rule.representation = Representation::dummy_coded(schema);
      break;
    case InstanceKind::kTokens: {
      std::vector<Instance> all;
      all.reserve(2 * pairs.size());
      for (const auto& p : pairs) {
        all.push_back(p.left);
        all.push_back(p.right);
      }
      Vocabulary vocab = Vocabulary::from_instances(all);
      m = vocab.size();
      rule.representation = Representation::word_presence(std::move(vocab));
      break;
    }
  }
  rule.kernel = KernelConfig::defaults_for(schema.kind, std::max<std::size_t>(m, 1));
  return rule;
}

namespace {

std::vector<double> truths_for(std::span<const InstancePair> pairs,
                               DistanceOracle& oracle) {
  return evaluate_all(oracle, pairs);
}

std::vector<std::unique_ptr<LocalModel>> explain_all(
    Explainer& explainer, std::span<const InstancePair> pairs,
    std::size_t threads = 1) {
  std::vector<std::unique_ptr<LocalModel>> out(pairs.size());
  parallel_for(pairs.size(), threads,
               [&](std::size_t i) { out[i] = explainer.explain(pairs[i]); });
  return out;
}

std::vector<double> self_predictions(
    const std::vector<std::unique_ptr<LocalModel>>& models) {
  std::vector<double> out;
  out.reserve(models.size());
  for (const auto& m : models) out.push_back(m->self_prediction());
  return out;
}

std::vector<double> cross_predictions(
    Explainer& explainer, const std::vector<std::unique_ptr<LocalModel>>& models,
    std::span<const InstancePair> pairs, const NeighborRule& rule) {
  if (!explainer.supports_transfer()) {
    throw UnsupportedMetricError(explainer.name() +
                                 " explanations cannot be transferred to "
                                 "neighboring pairs");
  }
  std::vector<std::size_t> nn =
      nearest_pairs(pairs, rule.representation, rule.kernel, rule.oracle);
  std::vector<double> out;
  out.reserve(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    out.push_back(models[nn[i]]->predict(pairs[i]));
  }
  return out;
}

}  // namespace

MetricResult infidelity(Explainer& explainer, std::span<const InstancePair> pairs,
                        DistanceOracle& oracle) {
  if (pairs.empty()) throw ValidationError("metric over an empty set");
  auto models = explain_all(explainer, pairs);
  std::vector<double> truths = truths_for(pairs, oracle);
  return infidelity(self_predictions(models), truths);
}

MetricResult generalized_infidelity(Explainer& explainer,
                                    std::span<const InstancePair> pairs,
                                    DistanceOracle& oracle,
                                    const NeighborRule& rule) {
  if (!explainer.supports_transfer()) {
    throw UnsupportedMetricError(explainer.name() +
                                 " explanations cannot be transferred to "
                                 "neighboring pairs");
  }
  if (pairs.size() < 2) {
    throw ValidationError("generalized infidelity needs at least two pairs");
  }
  auto models = explain_all(explainer, pairs);
  std::vector<double> truths = truths_for(pairs, oracle);
  return generalized_infidelity(cross_predictions(explainer, models, pairs, rule),
                                truths);
}

MetricResult pearson_fidelity(Explainer& explainer,
                              std::span<const InstancePair> pairs,
                              DistanceOracle& oracle) {
  auto models = explain_all(explainer, pairs);
  std::vector<double> truths = truths_for(pairs, oracle);
  return pearson_fidelity(self_predictions(models), truths);
}

double analogy_prediction(const AnalogySet& set, DistanceOracle& oracle) {
  if (set.items.empty()) throw ValidationError("empty analogy set");
  double s = 0.0;
  for (const auto& it : set.items) s += oracle(it.pair);
  return s / static_cast<double>(set.items.size());
}

std::vector<CurvePoint> sweep_k(AnalogyExplainer& explainer,
                                std::span<const InstancePair> pairs,
                                DistanceOracle& oracle,
                                std::span<const std::size_t> k_values) {
  if (pairs.empty()) throw ValidationError("sweep_k over an empty set");
  if (k_values.empty()) throw ValidationError("sweep_k: no k values");
  const std::size_t k_max = *std::max_element(k_values.begin(), k_values.end());
  if (*std::min_element(k_values.begin(), k_values.end()) == 0) {
    throw ValidationError("sweep_k: k must be >= 1");
  }
  std::vector<AnalogySet> sets;
  sets.reserve(pairs.size());
  for (const auto& p : pairs) sets.push_back(explainer.select(p, k_max));
  std::vector<double> truths = truths_for(pairs, oracle);

  std::vector<CurvePoint> out;
  for (std::size_t k : k_values) {
    std::vector<double> preds;
    preds.reserve(sets.size());
    for (const auto& s : sets) preds.push_back(analogy_prediction(s.prefix(k)));
    CurvePoint pt;
    pt.k = k;
    pt.infidelity = mean_absolute_error(preds, truths);
    try {
      pt.pearson = pearson_correlation(preds, truths);
    } catch (const ValidationError&) {
      pt.pearson.reset();
    }
    out.push_back(pt);
  }
  return out;
}

void write_results_csv(const std::filesystem::path& path,
                       std::span<const EvalRow> rows) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ValidationError("cannot write " + path.string());
  out << "method,metric,k,fold,value\n";
  char buf[40];
  for (const EvalRow& r : rows) {
    std::snprintf(buf, sizeof(buf), "%.17g", r.value);
    out << r.method << "," << r.metric << ","
        << (r.k ? std::to_string(*r.k) : std::string()) << "," << r.fold << ","
        << buf << "\n";
  }
  if (!out) throw ValidationError("failed writing " + path.string());
}

std::vector<EvalRow> read_results_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path.string());
  std::vector<EvalRow> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (lineno == 1) {
      if (line != "method,metric,k,fold,value") {
        throw ValidationError(path.string() + ":1: unexpected results header");
      }
      continue;
    }
    if (line.empty()) continue;
    std::vector<std::string> cells = split_csv_line(line);
    if (cells.size() != 5) {
      throw ValidationError(path.string() + ":" + std::to_string(lineno) +
                            ": expected 5 fields");
    }
    EvalRow r;
    r.method = cells[0];
    r.metric = cells[1];
    if (!cells[2].empty()) {
      std::size_t k = 0;
      auto [p, ec] = std::from_chars(cells[2].data(), cells[2].data() + cells[2].size(), k);
      if (ec != std::errc() || p != cells[2].data() + cells[2].size()) {
        throw ValidationError(path.string() + ":" + std::to_string(lineno) +
                              ":3: bad k");
      }
      r.k = k;
    }
    r.fold = cells[3];
    auto [p, ec] = std::from_chars(cells[4].data(), cells[4].data() + cells[4].size(),
                                   r.value);
    if (ec != std::errc() || p != cells[4].data() + cells[4].size()) {
      throw ValidationError(path.string() + ":" + std::to_string(lineno) +
                            ":5: bad value");
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

void EvalConfig::validate() const {
  if (methods.empty()) throw ValidationError("no methods selected");
  for (const std::string& m : methods) {
    if (m != "fbfull" && m != "fbdiag" && m != "gfbfull" && m != "lime" &&
        m != "jslime" && m != "abe" && m != "dirsim") {
      throw ValidationError("unknown method '" + m + "'");
    }
  }
  if (k_min == 0 || k_min > k_max) throw ValidationError("k range must satisfy 1 <= min <= max");
  if (folds == 0) throw ValidationError("folds must be >= 1");
  if (threads == 0) throw ValidationError("threads must be >= 1");
  fit.validate();
  if (analogy) analogy->validate();
}

Perturber make_perturber(const Schema& schema, std::span<const Instance> training,
                         double bias) {
  switch (schema.kind) {
    case InstanceKind::kNumeric:
      if (training.empty()) {
        throw ValidationError("numeric perturbation needs training instances");
      }
      return Perturber::numeric(schema, FeatureStats::from_data(training));
    case InstanceKind::kCategorical: {
      if (training.empty()) {
        throw ValidationError("categorical perturbation needs training instances");
      }
      CategoricalPerturber cp;
      cp.model = LogisticConditionalModel::fit(schema, training);
      cp.bias = bias;
      return Perturber::categorical(std::move(cp));
    }
    case InstanceKind::kTokens:
      return Perturber::tokens();
  }
  throw ValidationError("unsupported schema kind");
}

std::vector<std::size_t> assign_folds(std::span<const InstancePair> pairs,
                                      std::size_t folds, std::uint64_t seed) {
  if (folds == 0) throw ValidationError("folds must be >= 1");
  if (folds > pairs.size()) {
    throw ValidationError("more folds than pairs");
  }
  std::vector<std::tuple<std::uint64_t, std::string, std::size_t>> order;
  order.reserve(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    std::string key = pairs[i].key();
    order.emplace_back(derive_seed(seed, stable_hash(key)), std::move(key), i);
  }
  std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
    return std::tie(std::get<0>(a), std::get<1>(a)) <
           std::tie(std::get<0>(b), std::get<1>(b));
  });
  std::vector<std::size_t> out(pairs.size());
  for (std::size_t r = 0; r < order.size(); ++r) out[std::get<2>(order[r])] = r % folds;
  return out;
}

void parallel_for(std::size_t n, std::size_t threads,
                  const std::function<void(std::size_t)>& fn) {
  if (threads <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!error) error = std::current_exception();
        next.store(n);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  const std::size_t count = std::min(threads, n);
  pool.reserve(count);
  for (std::size_t t = 0; t < count; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

namespace {

// Per-fold values of one (method, metric, k) cell, in method order.
struct Cell {
  std::size_t method_rank;
  std::string method;
  std::size_t metric_rank;
  std::string metric;
  std::optional<std::size_t> k;
  std::vector<std::optional<double>> per_fold;
};

std::shared_ptr<const Embedding> default_phi(const EvalData& data) {
  if (data.phi) return data.phi;
  NeighborRule rule = default_neighbor_rule(data.pairs, data.schema);
  return std::make_shared<IdentityEmbedding>(rule.representation);
}

}  // namespace

EvalResult run_evaluation(const EvalData& data, const EvalConfig& cfg) {
  cfg.validate();
  if (!data.oracle) throw ValidationError("evaluation needs an oracle");
  if (data.pairs.size() < 2) throw ValidationError("evaluation needs >= 2 pairs");
  for (const auto& p : data.pairs) validate(p, data.schema);

  EvalResult result;
  auto oracle = std::dynamic_pointer_cast<CachingOracle>(data.oracle);
  if (!oracle) oracle = std::make_shared<CachingOracle>(data.oracle);

  std::vector<Instance> training = data.training;
  if (training.empty() && data.schema.kind != InstanceKind::kTokens) {
    for (const auto& p : data.pairs) {
      training.push_back(p.left);
      training.push_back(p.right);
    }
    result.warnings.push_back(
        "no training instances given; feature scales come from the pair file");
  }
  Perturber perturber = make_perturber(data.schema, training, cfg.bias);
  std::shared_ptr<const Embedding> phi = default_phi(data);
  const AnalogyConfig analogy =
      cfg.analogy.value_or(AnalogyConfig::defaults_for(data.schema.kind));

  std::vector<std::size_t> fold_of = assign_folds(data.pairs, cfg.folds, cfg.seed);

  std::vector<std::size_t> k_values;
  for (std::size_t k = cfg.k_min; k <= cfg.k_max; ++k) k_values.push_back(k);

  std::map<std::tuple<std::size_t, std::size_t, std::size_t>, Cell> cells;
  auto record = [&](std::size_t method_rank, const std::string& method,
                    std::size_t metric_rank, const std::string& metric,
                    std::optional<std::size_t> k, std::size_t fold,
                    std::optional<double> value) {
    auto key = std::make_tuple(method_rank, k.value_or(0), metric_rank);
    auto it = cells.find(key);
    if (it == cells.end()) {
      it = cells
               .emplace(key, Cell{method_rank, method, metric_rank, metric, k,
                                  std::vector<std::optional<double>>(cfg.folds)})
               .first;
    }
    it->second.per_fold[fold] = value;
  };

  for (std::size_t fold = 0; fold < cfg.folds; ++fold) {
    std::vector<InstancePair> test;
    std::vector<InstancePair> train;
    for (std::size_t i = 0; i < data.pairs.size(); ++i) {
      if (cfg.folds == 1 || fold_of[i] == fold) test.push_back(data.pairs[i]);
      if (cfg.folds == 1 || fold_of[i] != fold) train.push_back(data.pairs[i]);
    }
    if (test.size() < 2) {
      throw ValidationError("fold " + std::to_string(fold) +
                            " has fewer than two pairs");
    }
    std::vector<double> truths = evaluate_all(*oracle, test);
    NeighborRule rule = default_neighbor_rule(test, data.schema);

    auto pearson_or_warn = [&](const std::string& method, std::span<const double> preds)
        -> std::optional<double> {
      try {
        return pearson_correlation(preds, truths);
      } catch (const ValidationError& e) {
        result.warnings.push_back(method + " fold " + std::to_string(fold) + ": " +
                                  e.what());
        return std::nullopt;
      }
    };

    for (std::size_t mi = 0; mi < cfg.methods.size(); ++mi) {
      const std::string& method = cfg.methods[mi];
      if (method == "abe" || method == "dirsim") {
        auto pool = std::make_shared<const CandidatePool>(build_pool(train, *oracle, *phi));
        AnalogyExplainer ex(pool, *oracle, phi, analogy,
                            method == "abe" ? AnalogyExplainer::Method::kAbE
                                            : AnalogyExplainer::Method::kDirSim);
        std::vector<AnalogySet> sets;
        sets.reserve(test.size());
        for (const auto& p : test) sets.push_back(ex.select(p, cfg.k_max));
        for (std::size_t k : k_values) {
          std::vector<double> preds;
          preds.reserve(sets.size());
          for (const auto& s : sets) preds.push_back(analogy_prediction(s.prefix(k)));
          record(mi, method, 0, "infidelity", k, fold,
                 mean_absolute_error(preds, truths));
          record(mi, method, 2, "fidelity_r", k, fold, pearson_or_warn(method, preds));
        }
        continue;
      }
      if (method == "gfbfull") {
        NeighborRule train_rule = default_neighbor_rule(train, data.schema);
        FeatureSelector selector;
        if (train_rule.representation.dimension() > kGlobalFeatureCap) {
          selector = nonzero_count_selector();
        }
        GlobalExplainer ex(train, train_rule.representation, *oracle, cfg.fit, selector);
        for (const auto& w : ex.report().warnings) {
          result.warnings.push_back("gfbfull fold " + std::to_string(fold) + ": " + w);
        }
        auto models = explain_all(ex, test);
        std::vector<double> preds = self_predictions(models);
        record(mi, method, 0, "infidelity", std::nullopt, fold,
               mean_absolute_error(preds, truths));
        record(mi, method, 2, "fidelity_r", std::nullopt, fold,
               pearson_or_warn(method, preds));
        continue;
      }
      SurrogateExplainer::Options opts;
      opts.method = method == "fbfull"   ? SurrogateMethod::kFbFull
                    : method == "fbdiag" ? SurrogateMethod::kFbDiag
                    : method == "lime"   ? SurrogateMethod::kLime
                                         : SurrogateMethod::kJsLime;
      opts.neighborhood_size = cfg.neighborhood_size;
      opts.kernel_sigma_sq = cfg.kernel_sigma_sq;
      opts.fit = cfg.fit;
      opts.seed = cfg.seed;
      SurrogateExplainer ex(perturber, *oracle, opts);
      auto models = explain_all(ex, test, cfg.threads);
      std::vector<double> preds = self_predictions(models);
      std::vector<double> cross = cross_predictions(ex, models, test, rule);
      record(mi, method, 0, "infidelity", std::nullopt, fold,
             mean_absolute_error(preds, truths));
      record(mi, method, 1, "generalized_infidelity", std::nullopt, fold,
             mean_absolute_error(cross, truths));
      record(mi, method, 2, "fidelity_r", std::nullopt, fold,
             pearson_or_warn(method, preds));
      record(mi, method, 3, "generalized_fidelity_r", std::nullopt, fold,
             pearson_or_warn(method, cross));
    }
  }

  for (const auto& [key, cell] : cells) {
    std::vector<double> present;
    for (std::size_t f = 0; f < cell.per_fold.size(); ++f) {
      if (!cell.per_fold[f]) continue;
      present.push_back(*cell.per_fold[f]);
      result.rows.push_back({cell.method, cell.metric, cell.k, std::to_string(f),
                             *cell.per_fold[f]});
    }
    if (present.empty()) continue;
    MetricResult agg = aggregate_folds(cell.metric, present);
    result.rows.push_back({cell.method, cell.metric, cell.k, "mean", agg.value});
    result.rows.push_back({cell.method, cell.metric, cell.k, "sem", agg.sem});
  }
  return result;
}

}  // namespace simexplain
