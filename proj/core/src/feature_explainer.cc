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

#include "simexplain/feature_explainer.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "simexplain/errors.h"
#include "simexplain/mahalanobis.h"
#include "simexplain/nnls.h"

namespace simexplain {

std::string_view to_string(SurrogateKind kind) {
  switch (kind) {
    case SurrogateKind::kFull:
      return "full";
    case SurrogateKind::kDiag:
      return "diag";
    case SurrogateKind::kGlobal:
      return "global";
  }
  return "full";
}

SurrogateKind surrogate_kind_from_string(std::string_view name) {
  if (name == "full") return SurrogateKind::kFull;
  if (name == "diag") return SurrogateKind::kDiag;
  if (name == "global") return SurrogateKind::kGlobal;
  throw ValidationError("unknown surrogate kind: " + std::string(name));
}

namespace {

QuadraticDesign design_from(const Neighborhood& nbhd, DistanceOracle& oracle) {
  if (nbhd.size() == 0) throw ValidationError("empty neighborhood");
  std::vector<InstancePair> pairs = nbhd.pairs();
  std::vector<double> bb = evaluate_all(oracle, pairs);
  QuadraticDesign design;
  design.differences = nbhd.differences();
  design.targets = Eigen::Map<const Eigen::VectorXd>(
      bb.data(), static_cast<Eigen::Index>(bb.size()));
  design.weights = nbhd.weights();
  return design;
}

void copy_solver_diagnostics(const PsdSolveResult& res,
                             ExplanationReport& report) {
  report.objective = res.objective;
  report.weighted_loss = res.loss;
  report.iterations = res.iterations;
  report.converged = res.converged;
  report.degenerate = res.degenerate;
  if (!res.converged) {
    report.warnings.push_back("solver stopped at max_iters without converging");
  }
  if (res.degenerate) {
    report.warnings.push_back(
        "all interpretable differences are zero; surrogate is the zero matrix");
  }
}

std::vector<FeatureScore> rank_features(const Eigen::MatrixXd& contributions,
                                        const std::vector<std::string>& names) {
  Eigen::VectorXd rows = feature_contributions(contributions);
  std::vector<FeatureScore> out;
  out.reserve(static_cast<std::size_t>(rows.size()));
  for (Eigen::Index j = 0; j < rows.size(); ++j) {
    out.push_back({static_cast<std::size_t>(j),
                   names[static_cast<std::size_t>(j)], rows[j]});
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const FeatureScore& a, const FeatureScore& b) {
                     return std::abs(a.contribution) > std::abs(b.contribution);
                   });
  return out;
}

Eigen::VectorXd map_for_prediction(const Representation& rep,
                                   const Instance& inst) {
  return rep.map_lenient(inst).values;
}

}  // namespace

void attach_pair(ExplanationReport& report, const InstancePair& pair,
                 double bb_distance) {
  report.pair = pair;
  report.x_bar = map_for_prediction(report.representation, pair.left);
  report.y_bar = map_for_prediction(report.representation, pair.right);
  report.contributions = contribution_matrix(report.x_bar, report.y_bar, report.a);
  report.predicted_distance = std::max(0.0, report.contributions.sum());
  report.bb_distance = bb_distance;
  report.residual = bb_distance - report.predicted_distance;
  report.ranking =
      rank_features(report.contributions, report.representation.feature_names());
}

ExplanationReport fit_full(const Neighborhood& nbhd, DistanceOracle& oracle,
                           const FitConfig& cfg) {
  QuadraticDesign design = design_from(nbhd, oracle);
  PsdSolveResult res = solve_psd_least_squares(design, cfg);

  ExplanationReport report;
  report.kind = SurrogateKind::kFull;
  report.a = std::move(res.a);
  report.representation = nbhd.representation;
  report.config = cfg;
  report.sample_count = nbhd.size();
  report.seed = nbhd.seed;
  copy_solver_diagnostics(res, report);
  attach_pair(report, nbhd.explained().pair, design.targets[0]);
  return report;
}

ExplanationReport fit_diag(const Neighborhood& nbhd, DistanceOracle& oracle,
                           const FitConfig& cfg) {
  cfg.validate();
  QuadraticDesign design = design_from(nbhd, oracle);
  design.validate();

  // Weighted least squares: scale rows by sqrt(w).
  Eigen::VectorXd sw = design.weights.cwiseSqrt();
  Eigen::MatrixXd s = design.differences.cwiseProduct(design.differences);
  Eigen::MatrixXd a_mat = sw.asDiagonal() * s;
  Eigen::VectorXd b = sw.cwiseProduct(design.targets);

  ExplanationReport report;
  report.kind = SurrogateKind::kDiag;
  report.representation = nbhd.representation;
  report.config = cfg;
  report.sample_count = nbhd.size();
  report.seed = nbhd.seed;

  Eigen::VectorXd coef;
  if (cfg.max_nonzeros) {
    ForwardSelection sel = forward_select_nnls(a_mat, b, *cfg.max_nonzeros);
    coef = sel.fit.x;
    report.support = sel.support;
    report.converged = sel.fit.converged;
    report.iterations = sel.fit.iterations;
  } else {
    NnlsResult fit = nnls(a_mat, b);
    coef = fit.x;
    for (Eigen::Index j = 0; j < coef.size(); ++j) {
      if (coef[j] > 0.0) report.support.push_back(static_cast<std::size_t>(j));
    }
    report.converged = fit.converged;
    report.iterations = fit.iterations;
  }
  if (!report.converged) {
    report.warnings.push_back("NNLS stopped at its iteration cap");
  }
  report.degenerate = s.cwiseAbs().maxCoeff() == 0.0;
  if (report.degenerate) {
    report.warnings.push_back(
        "all interpretable differences are zero; surrogate is the zero matrix");
  }
  report.a = coef.asDiagonal();
  report.weighted_loss = weighted_loss(design, report.a);
  report.objective = report.weighted_loss;
  attach_pair(report, nbhd.explained().pair, design.targets[0]);
  return report;
}

FeatureSelector nonzero_count_selector() {
  return [](const Eigen::MatrixXd& differences, std::size_t cap) {
    const auto d = static_cast<std::size_t>(differences.cols());
    std::vector<std::pair<Eigen::Index, std::size_t>> counts;
    counts.reserve(d);
    for (std::size_t j = 0; j < d; ++j) {
      counts.emplace_back(
          (differences.col(static_cast<Eigen::Index>(j)).array() != 0.0).count(), j);
    }
    std::stable_sort(counts.begin(), counts.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    std::vector<std::size_t> keep;
    for (std::size_t r = 0; r < std::min(cap, d); ++r) keep.push_back(counts[r].second);
    return keep;
  };
}

ExplanationReport fit_global(std::span<const InstancePair> pairs,
                             const Representation& rep, DistanceOracle& oracle,
                             const FitConfig& cfg,
                             const FeatureSelector& selector, std::size_t cap) {
  if (pairs.empty()) throw ValidationError("fit_global: no pairs");
  const auto d = static_cast<Eigen::Index>(rep.dimension());
  const auto n = static_cast<Eigen::Index>(pairs.size());
  Eigen::MatrixXd diffs(n, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    const InstancePair& p = pairs[static_cast<std::size_t>(i)];
    diffs.row(i) = (rep.map_lenient(p.left).values - rep.map_lenient(p.right).values)
                       .transpose();
  }
  std::vector<double> bb = evaluate_all(oracle, pairs);

  ExplanationReport report;
  report.kind = SurrogateKind::kGlobal;
  report.representation = rep;
  report.config = cfg;
  report.sample_count = pairs.size();

  std::vector<std::size_t> keep;
  if (selector) {
    keep = selector(diffs, cap);
    std::set<std::size_t> seen;
    for (std::size_t k : keep) {
      if (k >= static_cast<std::size_t>(d) || !seen.insert(k).second) {
        throw ValidationError("feature selector returned an invalid index");
      }
    }
    if (keep.size() > cap) {
      throw ValidationError("feature selector exceeded the cap");
    }
    std::sort(keep.begin(), keep.end());
  } else {
    keep.resize(static_cast<std::size_t>(d));
    std::iota(keep.begin(), keep.end(), std::size_t{0});
  }

  QuadraticDesign design;
  design.differences.resize(n, static_cast<Eigen::Index>(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k) {
    design.differences.col(static_cast<Eigen::Index>(k)) =
        diffs.col(static_cast<Eigen::Index>(keep[k]));
  }
  design.targets =
      Eigen::Map<const Eigen::VectorXd>(bb.data(), static_cast<Eigen::Index>(bb.size()));
  design.weights = Eigen::VectorXd::Ones(n);

  FitConfig sub_cfg = cfg;
  if (sub_cfg.initial && sub_cfg.initial->rows() == d && keep.size() != static_cast<std::size_t>(d)) {
    Eigen::MatrixXd init(keep.size(), keep.size());
    for (std::size_t r = 0; r < keep.size(); ++r) {
      for (std::size_t c = 0; c < keep.size(); ++c) {
        init(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
            (*sub_cfg.initial)(static_cast<Eigen::Index>(keep[r]),
                               static_cast<Eigen::Index>(keep[c]));
      }
    }
    sub_cfg.initial = init;
  }
  PsdSolveResult res = solve_psd_least_squares(design, sub_cfg);
  report.a = Eigen::MatrixXd::Zero(d, d);
  for (std::size_t r = 0; r < keep.size(); ++r) {
    for (std::size_t c = 0; c < keep.size(); ++c) {
      report.a(static_cast<Eigen::Index>(keep[r]), static_cast<Eigen::Index>(keep[c])) =
          res.a(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    }
  }
  report.support = keep;
  copy_solver_diagnostics(res, report);
  return report;
}

double predict(const ExplanationReport& report, const InstancePair& pair) {
  Eigen::VectorXd u = map_for_prediction(report.representation, pair.left) -
                      map_for_prediction(report.representation, pair.right);
  return std::max(0.0, u.dot(report.a * u));
}

Json report_to_json(const ExplanationReport& report) {
  Json j;
  j["mode"] = std::string(to_string(report.kind));
  j["matrix"] = matrix_to_json(report.a);
  j["representation"] = representation_to_json(report.representation);
  j["feature_names"] = report.representation.feature_names();
  if (report.kind == SurrogateKind::kDiag) {
    // Sparse view of the diagonal: only coordinates with a nonzero weight.
    const std::vector<std::string> names = report.representation.feature_names();
    Json coeffs = Json::array();
    for (Eigen::Index i = 0; i < report.a.rows(); ++i) {
      const double w = report.a(i, i);
      if (w == 0.0) continue;
      coeffs.push_back({{"index", i},
                        {"name", names[static_cast<std::size_t>(i)]},
                        {"weight", round_number(w)}});
    }
    j["coefficients"] = std::move(coeffs);
  }
  if (report.pair) {
    j["pair"] = pair_to_json(*report.pair);
    j["x_bar"] = vector_to_json(report.x_bar);
    j["y_bar"] = vector_to_json(report.y_bar);
    j["contributions"] = matrix_to_json(report.contributions);
    j["predicted_distance"] = round_number(report.predicted_distance);
    j["bb_distance"] = round_number(report.bb_distance);
    j["residual"] = round_number(report.residual);
    Json ranking = Json::array();
    for (const FeatureScore& f : report.ranking) {
      ranking.push_back({{"index", f.index},
                         {"name", f.name},
                         {"contribution", round_number(f.contribution)}});
    }
    j["ranking"] = std::move(ranking);
  }
  j["diagnostics"] = {{"objective", round_number(report.objective)},
                      {"weighted_loss", round_number(report.weighted_loss)},
                      {"iterations", report.iterations},
                      {"converged", report.converged},
                      {"degenerate", report.degenerate},
                      {"support", report.support},
                      {"warnings", report.warnings}};
  Json cfg = {{"l1_weight", round_number(report.config.l1_weight)},
              {"max_iters", report.config.max_iters},
              {"tol", round_number(report.config.tol)},
              {"diagonal_only", report.config.diagonal_only}};
  if (report.config.max_nonzeros) {
    cfg["max_nonzeros"] = *report.config.max_nonzeros;
  } else {
    cfg["max_nonzeros"] = nullptr;
  }
  j["config"] = std::move(cfg);
  j["sample_count"] = report.sample_count;
  j["seed"] = report.seed;
  j["toolkit_version"] = kToolkitVersion;
  return j;
}

ExplanationReport report_from_json(const Json& j) {
  try {
    ExplanationReport report;
    report.kind = surrogate_kind_from_string(j.at("mode").get<std::string>());
    report.representation = representation_from_json(j.at("representation"));
    report.a = matrix_from_json(j.at("matrix"));
    const auto d = static_cast<Eigen::Index>(report.representation.dimension());
    if (report.a.rows() != d || report.a.cols() != d) {
      throw ValidationError("report matrix does not match the representation");
    }
    if (!is_symmetric(report.a) || !is_psd(report.a)) {
      throw ValidationError("report matrix is not symmetric PSD");
    }
    if (j.contains("pair")) {
      attach_pair(report, pair_from_json(j.at("pair")),
                  j.at("bb_distance").get<double>());
      // Keep the stored values; recomputing from the rounded matrix would
      // move the low digits.
      report.contributions = matrix_from_json(j.at("contributions"));
      report.predicted_distance = j.at("predicted_distance").get<double>();
      report.residual = j.at("residual").get<double>();
      report.ranking.clear();
      for (const Json& f : j.at("ranking")) {
        report.ranking.push_back({f.at("index").get<std::size_t>(),
                                  f.at("name").get<std::string>(),
                                  f.at("contribution").get<double>()});
      }
    }
    const Json& diag = j.at("diagnostics");
    report.objective = diag.at("objective").get<double>();
    report.weighted_loss = diag.at("weighted_loss").get<double>();
    report.iterations = diag.at("iterations").get<std::size_t>();
    report.converged = diag.at("converged").get<bool>();
    report.degenerate = diag.at("degenerate").get<bool>();
    report.support = diag.at("support").get<std::vector<std::size_t>>();
    report.warnings = diag.at("warnings").get<std::vector<std::string>>();
    const Json& cfg = j.at("config");
    report.config.l1_weight = cfg.at("l1_weight").get<double>();
    report.config.max_iters = cfg.at("max_iters").get<std::size_t>();
    report.config.tol = cfg.at("tol").get<double>();
    report.config.diagonal_only = cfg.at("diagonal_only").get<bool>();
    if (!cfg.at("max_nonzeros").is_null()) {
      report.config.max_nonzeros = cfg.at("max_nonzeros").get<std::size_t>();
    }
    report.sample_count = j.at("sample_count").get<std::size_t>();
    report.seed = j.at("seed").get<std::uint64_t>();
    return report;
  } catch (const Json::exception& e) {
    throw ValidationError(std::string("malformed explanation report: ") + e.what());
  }
}

}  // namespace simexplain
