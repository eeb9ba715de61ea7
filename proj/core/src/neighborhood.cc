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

#include "simexplain/neighborhood.h"

#include "simexplain/errors.h"
#include "simexplain/random.h"

namespace simexplain {

Perturber Perturber::numeric(Schema schema, FeatureStats stats) {
  if (schema.kind != InstanceKind::kNumeric) {
    throw ValidationError("numeric perturber needs a numeric schema");
  }
  if (stats.std.size() != schema.num_features()) {
    throw ValidationError("numeric perturber: stats/schema width mismatch");
  }
  Perturber p;
  p.schema_ = std::move(schema);
  p.stats_ = std::move(stats);
  return p;
}

Perturber Perturber::categorical(CategoricalPerturber perturber) {
  if (!perturber.model) throw ValidationError("categorical perturber has no model");
  Perturber p;
  p.schema_ = perturber.model->schema();
  p.categorical_ = std::move(perturber);
  return p;
}

Perturber Perturber::tokens() {
  Perturber p;
  p.schema_ = Schema::tokens();
  return p;
}

std::vector<Instance> Perturber::sample(const Instance& x, std::size_t n,
                                        std::uint64_t seed) const {
  switch (schema_.kind) {
    case InstanceKind::kNumeric:
      validate(x, schema_);
      return perturb_numeric(x, n, stats_, seed);
    case InstanceKind::kCategorical:
      return perturb_categorical(x, n, categorical_, seed);
    case InstanceKind::kTokens:
      return perturb_tokens(x, n, seed);
  }
  throw ValidationError("unsupported perturber kind");
}

KernelConfig Perturber::default_kernel(const InstancePair& pair) const {
  std::size_t m = schema_.num_features();
  if (schema_.kind == InstanceKind::kTokens) m = Vocabulary::from_pair(pair).size();
  return KernelConfig::defaults_for(schema_.kind, m);
}

std::vector<InstancePair> Neighborhood::pairs() const {
  std::vector<InstancePair> out;
  out.reserve(members.size());
  for (const auto& m : members) out.push_back(m.pair);
  return out;
}

Eigen::MatrixXd Neighborhood::differences() const {
  const auto d = static_cast<Eigen::Index>(representation.dimension());
  Eigen::MatrixXd u(static_cast<Eigen::Index>(members.size()), d);
  for (std::size_t i = 0; i < members.size(); ++i) {
    u.row(static_cast<Eigen::Index>(i)) = members[i].difference().transpose();
  }
  return u;
}

Eigen::VectorXd Neighborhood::weights() const {
  Eigen::VectorXd w(static_cast<Eigen::Index>(members.size()));
  for (std::size_t i = 0; i < members.size(); ++i) {
    w[static_cast<Eigen::Index>(i)] = members[i].weight;
  }
  return w;
}

Eigen::MatrixXd Neighborhood::left_matrix() const {
  const auto d = static_cast<Eigen::Index>(representation.dimension());
  Eigen::MatrixXd out(static_cast<Eigen::Index>(members.size()), d);
  for (std::size_t i = 0; i < members.size(); ++i) {
    out.row(static_cast<Eigen::Index>(i)) = members[i].left_bar.values.transpose();
  }
  return out;
}

Eigen::MatrixXd Neighborhood::right_matrix() const {
  const auto d = static_cast<Eigen::Index>(representation.dimension());
  Eigen::MatrixXd out(static_cast<Eigen::Index>(members.size()), d);
  for (std::size_t i = 0; i < members.size(); ++i) {
    out.row(static_cast<Eigen::Index>(i)) = members[i].right_bar.values.transpose();
  }
  return out;
}

double kernel_distance(const Instance& original, const Instance& perturbed,
                       const Representation& rep, const KernelConfig& cfg,
                       DistanceOracle* oracle) {
  switch (cfg.distance) {
    case KernelDistance::kManhattan:
      return manhattan_distance(rep.map_lenient(original).values,
                                rep.map_lenient(perturbed).values);
    case KernelDistance::kCosine:
      return presence_cosine_distance(rep.map_lenient(original).values,
                                      rep.map_lenient(perturbed).values);
    case KernelDistance::kOracle:
      if (!oracle) throw ValidationError("oracle kernel distance needs an oracle");
      return oracle->distance(original, perturbed);
  }
  throw ValidationError("unknown kernel distance");
}

Neighborhood build_neighborhood(const InstancePair& pair, std::size_t n,
                                const KernelConfig& cfg,
                                const Perturber& perturber, std::uint64_t seed,
                                DistanceOracle* oracle) {
  if (n == 0) throw ValidationError("neighborhood size must be >= 1");
  cfg.validate();
  if (pair.left.kind() != perturber.kind() || pair.right.kind() != perturber.kind()) {
    throw ValidationError("pair kind does not match the perturber");
  }
  validate(pair, perturber.schema());

  const std::vector<Instance> lefts =
      perturber.sample(pair.left, n - 1, derive_seed(seed, 1));
  const std::vector<Instance> rights =
      perturber.sample(pair.right, n - 1, derive_seed(seed, 2));

  Neighborhood nbhd;
  nbhd.seed = seed;
  nbhd.kernel = cfg;
  // Perturbations only ever drop tokens, so the pair's own vocabulary
  // already covers the whole neighborhood.
  nbhd.representation = Representation::for_pair(pair, perturber.schema());
  const Representation& rep = nbhd.representation;

  nbhd.members.reserve(n);
  nbhd.members.push_back(
      NeighborhoodMember{pair, rep.map(pair.left), rep.map(pair.right), 2.0});
  for (std::size_t i = 0; i + 1 < n; ++i) {
    InstancePair p{lefts[i], rights[i]};
    const double fl = kernel_distance(pair.left, p.left, rep, cfg, oracle);
    const double fr = kernel_distance(pair.right, p.right, rep, cfg, oracle);
    NeighborhoodMember m{p, rep.map(p.left), rep.map(p.right),
                         pair_weight(fl, fr, cfg)};
    nbhd.members.push_back(std::move(m));
  }
  return nbhd;
}

Json neighborhood_to_json(const Neighborhood& nbhd) {
  Json members = Json::array();
  for (const auto& m : nbhd.members) {
    Json jm = pair_to_json(m.pair);
    jm["weight"] = round_number(m.weight);
    members.push_back(std::move(jm));
  }
  return Json{{"seed", nbhd.seed},
              {"size", nbhd.size()},
              {"kernel",
               {{"sigma_sq", round_number(nbhd.kernel.sigma_sq)},
                {"distance", std::string(to_string(nbhd.kernel.distance))}}},
              {"representation", representation_to_json(nbhd.representation)},
              {"members", members}};
}

Neighborhood neighborhood_from_json(const Json& j) {
  Neighborhood nbhd;
  nbhd.seed = j.at("seed").get<std::uint64_t>();
  nbhd.kernel.sigma_sq = j.at("kernel").at("sigma_sq").get<double>();
  nbhd.kernel.distance =
      kernel_distance_from_string(j.at("kernel").at("distance").get<std::string>());
  nbhd.representation = representation_from_json(j.at("representation"));
  for (const Json& jm : j.at("members")) {
    InstancePair p = pair_from_json(jm);
    NeighborhoodMember m{p, nbhd.representation.map(p.left),
                         nbhd.representation.map(p.right),
                         jm.at("weight").get<double>()};
    nbhd.members.push_back(std::move(m));
  }
  if (nbhd.members.size() != j.at("size").get<std::size_t>()) {
    throw ValidationError("neighborhood size does not match member count");
  }
  return nbhd;
}

}  // namespace simexplain
