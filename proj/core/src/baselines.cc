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

#include "simexplain/baselines.h"

#include <cmath>

#include "simexplain/errors.h"

namespace simexplain {

Eigen::VectorXd weighted_ridge(const Eigen::MatrixXd& x, const Eigen::VectorXd& t,
                               const Eigen::VectorXd& w, double ridge) {
  if (x.rows() != t.size() || x.rows() != w.size()) {
    throw ValidationError("weighted_ridge: dimension mismatch");
  }
  if (!(ridge > 0.0)) throw ValidationError("ridge must be > 0");
  const Eigen::VectorXd sw = w.cwiseSqrt();
  const Eigen::MatrixXd xs = sw.asDiagonal() * x;
  const Eigen::VectorXd ts = sw.cwiseProduct(t);
  if (x.cols() <= x.rows()) {
    Eigen::MatrixXd g = xs.transpose() * xs;
    g.diagonal().array() += ridge;
    return g.ldlt().solve(xs.transpose() * ts);
  }
  Eigen::MatrixXd k = xs * xs.transpose();
  k.diagonal().array() += ridge;
  return xs.transpose() * k.ldlt().solve(ts);
}

namespace {

Eigen::VectorXd oracle_targets(const Neighborhood& nbhd, DistanceOracle& oracle) {
  if (nbhd.size() == 0) throw ValidationError("empty neighborhood");
  std::vector<InstancePair> pairs = nbhd.pairs();
  std::vector<double> bb = evaluate_all(oracle, pairs);
  return Eigen::Map<const Eigen::VectorXd>(bb.data(),
                                           static_cast<Eigen::Index>(bb.size()));
}

bool rows_identical(const Eigen::MatrixXd& x) {
  for (Eigen::Index i = 1; i < x.rows(); ++i) {
    if (x.row(i) != x.row(0)) return false;
  }
  return true;
}

}  // namespace

double LinearSurrogate::predict(const Eigen::VectorXd& xbar,
                                const Eigen::VectorXd& ybar) const {
  if (xbar.size() != g_x.size() || ybar.size() != g_y.size()) {
    throw ValidationError("linear surrogate: dimension mismatch");
  }
  return g_x.dot(xbar) + g_y.dot(ybar) + intercept;
}

double LinearSurrogate::predict(const InstancePair& p) const {
  return predict(representation.map_lenient(p.left).values,
                 representation.map_lenient(p.right).values);
}

LinearSurrogate fit_concat_linear(const Neighborhood& nbhd, DistanceOracle& oracle,
                                  double ridge) {
  Eigen::VectorXd t = oracle_targets(nbhd, oracle);
  Eigen::VectorXd w = nbhd.weights();
  Eigen::MatrixXd xl = nbhd.left_matrix();
  Eigen::MatrixXd xr = nbhd.right_matrix();
  const Eigen::Index d = xl.cols();
  Eigen::MatrixXd x(xl.rows(), 2 * d);
  x << xl, xr;

  LinearSurrogate s;
  s.representation = nbhd.representation;
  const double wsum = w.sum();
  if (!(wsum > 0.0)) throw ValidationError("neighborhood weights sum to zero");
  if (rows_identical(x)) {
    s.g_x = Eigen::VectorXd::Zero(d);
    s.g_y = Eigen::VectorXd::Zero(d);
    s.intercept = w.dot(t) / wsum;
    s.intercept_only = true;
  } else {
    // Centering with weighted means leaves the intercept unpenalized.
    Eigen::RowVectorXd mx = (w.transpose() * x) / wsum;
    const double mt = w.dot(t) / wsum;
    Eigen::MatrixXd xc = x.rowwise() - mx;
    Eigen::VectorXd tc = t.array() - mt;
    Eigen::VectorXd beta = weighted_ridge(xc, tc, w, ridge);
    s.g_x = beta.head(d);
    s.g_y = beta.tail(d);
    s.intercept = mt - mx.dot(beta);
  }
  const NeighborhoodMember& e = nbhd.explained();
  s.pair = e.pair;
  s.predicted_distance = s.predict(e.left_bar.values, e.right_bar.values);
  s.bb_distance = t[0];
  return s;
}

double BilinearSurrogate::predict(const Eigen::VectorXd& xbar,
                                  const Eigen::VectorXd& ybar) const {
  if (xbar.size() != a.rows() || ybar.size() != a.cols()) {
    throw ValidationError("bilinear surrogate: dimension mismatch");
  }
  return xbar.dot(a * ybar);
}

double BilinearSurrogate::predict(const InstancePair& p) const {
  return predict(representation.map_lenient(p.left).values,
                 representation.map_lenient(p.right).values);
}

BilinearSurrogate fit_bilinear(const Neighborhood& nbhd, DistanceOracle& oracle,
                               double ridge) {
  Eigen::VectorXd t = oracle_targets(nbhd, oracle);
  Eigen::VectorXd w = nbhd.weights();
  Eigen::MatrixXd xl = nbhd.left_matrix();
  Eigen::MatrixXd xr = nbhd.right_matrix();
  const Eigen::Index n = xl.rows();
  const Eigen::Index d = xl.cols();

  // Column (j, k) -> j * d + k holds xbar_j * ybar_k.
  Eigen::MatrixXd x(n, d * d);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      for (Eigen::Index k = 0; k < d; ++k) x(i, j * d + k) = xl(i, j) * xr(i, k);
    }
  }
  BilinearSurrogate s;
  s.representation = nbhd.representation;
  Eigen::VectorXd beta = weighted_ridge(x, t, w, ridge);
  s.a = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                       Eigen::RowMajor>>(beta.data(), d, d);
  Eigen::MatrixXd xs = w.cwiseSqrt().asDiagonal() * x;
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(xs);
  s.rank_deficient = qr.rank() < d * d;

  const NeighborhoodMember& e = nbhd.explained();
  s.pair = e.pair;
  s.predicted_distance = s.predict(e.left_bar.values, e.right_bar.values);
  s.bb_distance = t[0];
  return s;
}

Json linear_to_json(const LinearSurrogate& s) {
  Json j{{"mode", "lime"},
         {"g_x", vector_to_json(s.g_x)},
         {"g_y", vector_to_json(s.g_y)},
         {"intercept", round_number(s.intercept)},
         {"intercept_only", s.intercept_only},
         {"feature_names", s.representation.feature_names()},
         {"representation", representation_to_json(s.representation)},
         {"predicted_distance", round_number(s.predicted_distance)},
         {"bb_distance", round_number(s.bb_distance)},
         {"residual", round_number(s.bb_distance - s.predicted_distance)},
         {"toolkit_version", kToolkitVersion}};
  if (s.pair) j["pair"] = pair_to_json(*s.pair);
  return j;
}

Json bilinear_to_json(const BilinearSurrogate& s) {
  Json j{{"mode", "jslime"},
         {"matrix", matrix_to_json(s.a)},
         {"rank_deficient", s.rank_deficient},
         {"feature_names", s.representation.feature_names()},
         {"representation", representation_to_json(s.representation)},
         {"predicted_distance", round_number(s.predicted_distance)},
         {"bb_distance", round_number(s.bb_distance)},
         {"residual", round_number(s.bb_distance - s.predicted_distance)},
         {"toolkit_version", kToolkitVersion}};
  if (s.pair) j["pair"] = pair_to_json(*s.pair);
  return j;
}

}  // namespace simexplain
