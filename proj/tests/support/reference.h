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

// Independent reference routines for tests. Nothing here calls the library
// code it is used to check; only Instance accessors and oracles are shared.

#ifndef SIMEXPLAIN_TESTS_REFERENCE_H_
#define SIMEXPLAIN_TESTS_REFERENCE_H_

#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "simexplain/analogy.h"
#include "simexplain/instance.h"
#include "simexplain/oracle.h"

namespace simexplain::testing {

// sum_jk u_j A_jk u_k by explicit loops.
double brute_quadratic(const Eigen::VectorXd& u, const Eigen::MatrixXd& a);

double brute_mae(const std::vector<double>& p, const std::vector<double>& t);
// Textbook two-pass Pearson in long double.
double brute_pearson(const std::vector<double>& p, const std::vector<double>& t);

// Analogy objective written out term by term from its definition, using
// plain oracle calls and raw numeric directions (phi = identity on numeric
// instances).
struct ReferenceProblem {
  std::vector<InstancePair> pool;
  InstancePair target;
  double lambda1 = 1.0;
  double lambda2 = 0.01;
  bool use_fidelity = true;
};

double reference_objective(const ReferenceProblem& p, const std::vector<std::size_t>& set,
                           DistanceOracle& oracle);

// Every k-subset of {0..n-1} in lexicographic order.
std::vector<std::vector<std::size_t>> all_subsets(std::size_t n, std::size_t k);

// min ||A x - b||^2, x >= 0, by enumerating every active set.
Eigen::VectorXd brute_nnls(const Eigen::MatrixXd& a, const Eigen::VectorXd& b);

// Random numeric pair with coordinates ~ N(0, scale^2).
InstancePair random_numeric_pair(std::size_t d, std::uint64_t seed, double scale = 1.0);

// Squared Euclidean distance on numeric instances.
std::shared_ptr<DistanceOracle> squared_euclidean_oracle();

// (x - y)^T A (x - y) on raw numeric instances, via brute_quadratic.
std::shared_ptr<DistanceOracle> quadratic_oracle(const Eigen::MatrixXd& a);

}  // namespace simexplain::testing

#endif  // SIMEXPLAIN_TESTS_REFERENCE_H_
