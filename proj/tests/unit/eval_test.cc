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


#include <algorithm>
#include <cmath>
#include <filesystem>
#include <map>
#include <random>

#include <gtest/gtest.h>

#include "reference.h"
#include "simexplain/errors.h"
#include "simexplain/evaluation.h"
#include "simexplain/metrics.h"
#include "simexplain/synthetic.h"

namespace simexplain {
namespace {

// Explanation of pair p predicts w_p * (q.left - q.right)^2 for any 1-d q.
class ScaledModel : public LocalModel {
 public:
  ScaledModel(double w, InstancePair self) : w_(w), self_(std::move(self)) {}
  double self_prediction() const override { return predict(self_); }
  double predict(const InstancePair& q) const override {
    const double u = q.left.values()[0] - q.right.values()[0];
    return w_ * u * u;
  }

 private:
  double w_;
  InstancePair self_;
};

class StubExplainer : public Explainer {
 public:
  explicit StubExplainer(std::map<std::string, double> weights) : weights_(std::move(weights)) {}
  std::string name() const override { return "stub"; }
  std::unique_ptr<LocalModel> explain(const InstancePair& p) override {
    return std::make_unique<ScaledModel>(weights_.at(p.key()), p);
  }

 private:
  std::map<std::string, double> weights_;
};

InstancePair p1(double a, double b) { return {Instance::numeric({a}), Instance::numeric({b})}; }

struct Fixture {
  std::vector<InstancePair> pairs{p1(0, 1), p1(0.1, 1.1), p1(5, 5.5)};
  StubExplainer explainer{{{pairs[0].key(), 1.0}, {pairs[1].key(), 2.0}, {pairs[2].key(), 3.0}}};
  std::shared_ptr<DistanceOracle> oracle = testing::squared_euclidean_oracle();
  NeighborRule rule{Representation::identity(Schema::numeric(1)),
                    KernelConfig::defaults_for(InstanceKind::kNumeric, 1), nullptr};
};

TEST(Mae, HandValue) {
  std::vector<double> p{0.1, 0.2}, t{0.2, 0.4};
  EXPECT_NEAR(mean_absolute_error(p, t), 0.15, 1e-15);
  EXPECT_THROW(mean_absolute_error(std::vector<double>{}, std::vector<double>{}), ValidationError);
  EXPECT_THROW(mean_absolute_error(p, std::vector<double>{1.0}), ValidationError);
}

TEST(Pearson, PerfectAndAffineInvariant) {
  std::vector<double> t{1, 2, 4, 8};
  std::vector<double> up{3, 5, 9, 17}, down{-1, -2, -4, -8};
  EXPECT_NEAR(pearson_correlation(up, t), 1.0, 1e-15);
  EXPECT_NEAR(pearson_correlation(down, t), -1.0, 1e-15);
  std::vector<double> p{0.3, 1.9, 2.2, 9.0};
  std::vector<double> q;
  for (double v : p) q.push_back(4.0 * v - 7.0);
  EXPECT_NEAR(pearson_correlation(p, t), pearson_correlation(q, t), 1e-14);
  EXPECT_NEAR(pearson_correlation(p, t), testing::brute_pearson(p, t), 1e-13);
  EXPECT_THROW(pearson_correlation(std::vector<double>{1, 1, 1}, std::vector<double>{1, 2, 3}),
               ValidationError);
  EXPECT_THROW(pearson_correlation(std::vector<double>{1}, std::vector<double>{1}), ValidationError);
}

TEST(StandardError, SampleStdOverRootN) {
  std::vector<double> v{1.0, 2.0, 4.0};
  // mean 7/3; squared deviations sum 14/3; sample var 7/3.
  EXPECT_NEAR(standard_error(v), std::sqrt(7.0 / 3.0) / std::sqrt(3.0), 1e-15);
  EXPECT_EQ(standard_error(std::vector<double>{5.0}), 0.0);
  MetricResult r = aggregate_folds("x", v);
  EXPECT_NEAR(r.value, 7.0 / 3.0, 1e-15);
  EXPECT_GE(r.sem, 0.0);
}

TEST(AnalogyPrediction, MeanOfSelectedDistances) {
  AnalogySet s;
  for (double bb : {0.2, 0.4, 0.6}) s.items.push_back(SelectedAnalogy{0, p1(0, 1), bb, {}});
  EXPECT_NEAR(analogy_prediction(s), 0.4, 1e-15);
  EXPECT_THROW(analogy_prediction(AnalogySet{}), ValidationError);
}

TEST(NearestPairs, FixtureNeighborsAndSelfExclusion) {
  Fixture f;
  auto nn = nearest_pairs(f.pairs, f.rule.representation, f.rule.kernel);
  EXPECT_EQ(nn, (std::vector<std::size_t>{1, 0, 1}));
  std::vector<InstancePair> twins{p1(2, 3), p1(2, 3)};
  EXPECT_EQ(nearest_pairs(twins, f.rule.representation, f.rule.kernel),
            (std::vector<std::size_t>{1, 0}));
}

TEST(Metrics, ThreePairFixtureHandValues) {
  Fixture f;
  // truths 1, 1, 0.25; self predictions 1, 2, 0.75.
  EXPECT_NEAR(infidelity(f.explainer, f.pairs, *f.oracle).value, (0.0 + 1.0 + 0.5) / 3.0, 1e-12);
  // Cross predictions: pair 0 by model 1 -> 2; pair 1 by model 0 -> 1;
  // pair 2 by model 1 -> 0.5.
  EXPECT_NEAR(generalized_infidelity(f.explainer, f.pairs, *f.oracle, f.rule).value,
              (1.0 + 0.0 + 0.25) / 3.0, 1e-12);
  std::vector<double> self{1.0, 2.0, 0.75}, truths{1.0, 1.0, 0.25};
  EXPECT_NEAR(pearson_fidelity(f.explainer, f.pairs, *f.oracle).value,
              testing::brute_pearson(self, truths), 1e-12);
}

TEST(Metrics, IdenticalPairsCrossPredict) {
  Fixture f;
  std::vector<InstancePair> twins{p1(0, 2), p1(0, 2)};
  StubExplainer e{{{twins[0].key(), 0.5}}};
  // Each twin is explained by the same model: prediction 2, truth 4.
  EXPECT_NEAR(generalized_infidelity(e, twins, *f.oracle, f.rule).value, 2.0, 1e-15);
}

TEST(Metrics, OrderingInvariance) {
  Fixture f;
  std::vector<InstancePair> rev(f.pairs.rbegin(), f.pairs.rend());
  EXPECT_NEAR(infidelity(f.explainer, rev, *f.oracle).value,
              infidelity(f.explainer, f.pairs, *f.oracle).value, 1e-15);
  EXPECT_NEAR(generalized_infidelity(f.explainer, rev, *f.oracle, f.rule).value,
              generalized_infidelity(f.explainer, f.pairs, *f.oracle, f.rule).value, 1e-15);
  EXPECT_NEAR(pearson_fidelity(f.explainer, rev, *f.oracle).value,
              pearson_fidelity(f.explainer, f.pairs, *f.oracle).value, 1e-14);
}

TEST(Metrics, AnalogyExplainerRejectsTransfer) {
  Fixture f;
  auto pool = std::make_shared<CandidatePool>(build_pool(
      f.pairs, *f.oracle, IdentityEmbedding(Representation::identity(Schema::numeric(1)))));
  auto phi = std::make_shared<IdentityEmbedding>(Representation::identity(Schema::numeric(1)));
  AnalogyConfig cfg;
  cfg.k = 1;
  AnalogyExplainer abe(pool, *f.oracle, phi, cfg);
  EXPECT_THROW(generalized_infidelity(abe, f.pairs, *f.oracle, f.rule), UnsupportedMetricError);
}

TEST(ResultsCsv, RoundTripIsExact) {
  std::vector<EvalRow> rows{{"fbfull", "infidelity", std::nullopt, "0", 0.1 + 0.2},
                            {"abe", "infidelity", 3, "mean", 1.0 / 3.0},
                            {"abe", "fidelity_r", 10, "sem", 6.02214076e23}};
  auto path = std::filesystem::temp_directory_path() / "simexplain_results_test.csv";
  write_results_csv(path, rows);
  EXPECT_EQ(read_results_csv(path), rows);
  std::filesystem::remove(path);
}

TEST(Folds, PartitionAndContentBased) {
  SyntheticConfig sc;
  sc.num_pairs = 53;
  sc.seed = 3;
  SyntheticDataset ds = make_synthetic(sc);
  auto folds = assign_folds(ds.pairs, 5, 9);
  std::vector<std::size_t> counts(5, 0);
  for (std::size_t f : folds) ++counts.at(f);
  for (std::size_t c : counts) {
    EXPECT_GE(c, 10u);
    EXPECT_LE(c, 11u);
  }
  std::vector<InstancePair> rev(ds.pairs.rbegin(), ds.pairs.rend());
  auto folds_rev = assign_folds(rev, 5, 9);
  for (std::size_t i = 0; i < rev.size(); ++i) EXPECT_EQ(folds_rev[i], folds[rev.size() - 1 - i]);
  EXPECT_THROW(assign_folds(ds.pairs, 0, 1), ValidationError);
  EXPECT_THROW(assign_folds(ds.pairs, 54, 1), ValidationError);
}

TEST(SweepK, MatchesIndependentSelections) {
  SyntheticConfig sc;
  sc.num_pairs = 25;
  sc.dim = 3;
  sc.seed = 4;
  SyntheticDataset ds = make_synthetic(sc);
  auto phi = std::make_shared<IdentityEmbedding>(Representation::identity(ds.schema));
  auto pool = std::make_shared<CandidatePool>(build_pool(ds.pairs, *ds.oracle, *phi));
  AnalogyConfig cfg;
  cfg.k = 4;
  AnalogyExplainer abe(pool, *ds.oracle, phi, cfg);
  std::vector<InstancePair> test(ds.pairs.begin(), ds.pairs.begin() + 6);
  std::vector<std::size_t> ks{1, 2, 4};
  auto curve = sweep_k(abe, test, *ds.oracle, ks);
  ASSERT_EQ(curve.size(), 3u);
  for (std::size_t c = 0; c < 3; ++c) {
    std::vector<double> preds, truths;
    for (const auto& p : test) {
      preds.push_back(analogy_prediction(abe.select(p, ks[c]), *ds.oracle));
      truths.push_back(ds.oracle->distance(p.left, p.right));
    }
    EXPECT_NEAR(curve[c].infidelity, testing::brute_mae(preds, truths), 1e-12);
  }
  EXPECT_THROW(sweep_k(abe, test, *ds.oracle, std::vector<std::size_t>{0}), ValidationError);
}

EvalData small_eval_data(std::uint64_t seed) {
  SyntheticConfig sc;
  sc.num_pairs = 16;
  sc.dim = 3;
  sc.num_training = 60;
  sc.seed = seed;
  SyntheticDataset ds = make_synthetic(sc);
  return EvalData{ds.schema, ds.pairs, ds.training, ds.oracle, nullptr};
}

EvalConfig small_eval_config() {
  EvalConfig cfg;
  cfg.k_max = 3;
  cfg.folds = 2;
  cfg.seed = 11;
  cfg.neighborhood_size = 40;
  return cfg;
}

TEST(RunEvaluation, DeterministicAndThreadIndependent) {
  EvalData data = small_eval_data(5);
  EvalConfig cfg = small_eval_config();
  EvalResult a = run_evaluation(data, cfg);
  EvalResult b = run_evaluation(data, cfg);
  cfg.threads = 4;
  EvalResult c = run_evaluation(data, cfg);
  EXPECT_EQ(a.rows, b.rows);
  EXPECT_EQ(a.rows, c.rows);
  ASSERT_FALSE(a.rows.empty());
  for (const auto& r : a.rows) {
    EXPECT_TRUE(std::isfinite(r.value)) << r.method << " " << r.metric;
    if (r.fold == "sem") {
      EXPECT_GE(r.value, 0.0);
    }
  }
}

TEST(RunEvaluation, OrderingInvariance) {
  EvalData data = small_eval_data(6);
  EvalConfig cfg = small_eval_config();
  cfg.methods = {"fbfull", "gfbfull", "abe"};
  EvalResult a = run_evaluation(data, cfg);
  std::reverse(data.pairs.begin(), data.pairs.end());
  EvalResult b = run_evaluation(data, cfg);
  ASSERT_EQ(a.rows.size(), b.rows.size());
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    EXPECT_EQ(a.rows[i].method, b.rows[i].method);
    EXPECT_EQ(a.rows[i].metric, b.rows[i].metric);
    EXPECT_NEAR(a.rows[i].value, b.rows[i].value, 1e-9 * (1 + std::fabs(a.rows[i].value)));
  }
}

TEST(RunEvaluation, ValidatesConfig) {
  EvalData data = small_eval_data(7);
  EvalConfig cfg = small_eval_config();
  cfg.methods = {"nope"};
  EXPECT_THROW(run_evaluation(data, cfg), ValidationError);
  cfg = small_eval_config();
  cfg.k_min = 5;
  cfg.k_max = 2;
  EXPECT_THROW(run_evaluation(data, cfg), ValidationError);
}

TEST(ParallelFor, VisitsEveryIndexAndRethrows) {
  std::vector<int> hits(100, 0);
  parallel_for(100, 4, [&](std::size_t i) { hits[i] += 1; });
  EXPECT_EQ(std::count(hits.begin(), hits.end(), 1), 100);
  EXPECT_THROW(parallel_for(10, 3,
                            [](std::size_t i) {
                              if (i == 7) throw OracleError("boom");
                            }),
               OracleError);
}

}  // namespace
}  // namespace simexplain
