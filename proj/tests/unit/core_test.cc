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

#include <cmath>
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "reference.h"
#include "simexplain/errors.h"
#include "simexplain/instance.h"
#include "simexplain/mahalanobis.h"
#include "simexplain/representation.h"

namespace simexplain {
namespace {

using testing::brute_quadratic;

Eigen::MatrixXd random_lower_psd(Eigen::Index d, std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j <= i; ++j) l(i, j) = n(rng);
  }
  return l * l.transpose();
}

Eigen::VectorXd random_vec(Eigen::Index d, std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  Eigen::VectorXd v(d);
  for (Eigen::Index i = 0; i < d; ++i) v(i) = n(rng);
  return v;
}

TEST(Interpretable, NumericIdentity) {
  Schema s = Schema::numeric(2);
  InterpretableVector v =
      to_interpretable(Instance::numeric({1.5, -2.0}), Representation::identity(s));
  ASSERT_EQ(v.dimension(), 2);
  EXPECT_EQ(v.values(0), 1.5);
  EXPECT_EQ(v.values(1), -2.0);
}

TEST(Interpretable, CategoricalOneHotBlock) {
  Schema s = Schema::categorical({"color"}, {3});
  InterpretableVector v =
      to_interpretable(Instance::categorical({1}), Representation::dummy_coded(s));
  EXPECT_EQ(v.values, Eigen::Vector3d(0, 1, 0));
}

TEST(Interpretable, CategoricalBlocksAreOffset) {
  Schema s = Schema::categorical({"a", "b"}, {2, 3});
  Representation rep = Representation::dummy_coded(s);
  EXPECT_EQ(rep.block_offset(1), 2u);
  InterpretableVector v = to_interpretable(Instance::categorical({0, 2}), rep);
  Eigen::VectorXd want(5);
  want << 1, 0, 0, 0, 1;
  EXPECT_EQ(v.values, want);
}

TEST(Interpretable, WordPresence) {
  Representation rep = Representation::word_presence(Vocabulary({"a", "b", "c"}));
  InterpretableVector v = to_interpretable(Instance::tokens({"c", "a"}), rep);
  EXPECT_EQ(v.values, Eigen::Vector3d(1, 0, 1));
}

TEST(Interpretable, EntriesAreBinaryForPresenceAndDummy) {
  std::mt19937_64 rng(4);
  Schema s = Schema::categorical({"a", "b", "c"}, {2, 4, 3});
  Representation rep = Representation::dummy_coded(s);
  for (int t = 0; t < 100; ++t) {
    std::vector<std::size_t> c{rng() % 2, rng() % 4, rng() % 3};
    Eigen::VectorXd v = rep.map(Instance::categorical(c)).values;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      EXPECT_TRUE(v(i) == 0.0 || v(i) == 1.0);
    }
    EXPECT_EQ(v.sum(), 3.0);
  }
}

TEST(Interpretable, UnknownTokenRejectedUnlessLenient) {
  Representation rep = Representation::word_presence(Vocabulary({"a", "b"}));
  EXPECT_THROW(rep.map(Instance::tokens({"a", "z"})), ValidationError);
  EXPECT_EQ(rep.map_lenient(Instance::tokens({"a", "z"})).values, Eigen::Vector2d(1, 0));
}

TEST(Validation, SchemaViolations) {
  Schema num = Schema::numeric(2);
  EXPECT_THROW(validate(Instance::numeric({1.0}), num), ValidationError);
  EXPECT_THROW(validate(Instance::numeric({1.0, std::nan("")}), num), ValidationError);
  Schema cat = Schema::categorical({"a"}, {2});
  EXPECT_THROW(validate(Instance::categorical({2}), cat), ValidationError);
  EXPECT_NO_THROW(validate(Instance::categorical({1}), cat));
  EXPECT_THROW(validate(Instance::tokens({"a"}), num), ValidationError);
}

TEST(Instance, TokensAreASortedSet) {
  Instance t = Instance::tokens({"b", "a", "b"});
  EXPECT_EQ(t.token_set(), (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(Instance::sentence("b a  b").key(), t.key());
}

TEST(Vocabulary, AlphabeticalFromPair) {
  Vocabulary v = Vocabulary::from_pair({Instance::tokens({"dog", "cat"}),
                                        Instance::tokens({"cat", "ant"})});
  EXPECT_EQ(v.words(), (std::vector<std::string>{"ant", "cat", "dog"}));
  EXPECT_EQ(v.index_of("dog"), 2u);
  EXPECT_FALSE(v.index_of("eel").has_value());
}

TEST(PsdMatrix, Invariants) {
  Eigen::Matrix2d asym;
  asym << 1, 0.5, 0.4, 1;
  EXPECT_THROW(PsdMatrix{asym}, ValidationError);
  Eigen::Matrix2d neg;
  neg << 1, 0, 0, -0.1;
  EXPECT_THROW(PsdMatrix{neg}, ValidationError);
  Eigen::Matrix2d jitter;
  jitter << 1, 0, 0, -1e-9;
  EXPECT_NO_THROW(PsdMatrix{jitter});
}

TEST(Mahalanobis, ZeroDifference) {
  std::mt19937_64 rng(1);
  Eigen::VectorXd x = random_vec(4, rng);
  EXPECT_EQ(mahalanobis_distance(x, x, PsdMatrix(random_lower_psd(4, rng))), 0.0);
}

TEST(Mahalanobis, IdentityUnitStep) {
  EXPECT_EQ(mahalanobis_distance(Eigen::Vector2d(1, 0), Eigen::Vector2d(0, 0),
                                 PsdMatrix::identity(2)),
            1.0);
}

TEST(Mahalanobis, MatchesBruteForceDoubleSum) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 200; ++t) {
    const Eigen::Index d = 1 + static_cast<Eigen::Index>(rng() % 7);
    Eigen::MatrixXd a = random_lower_psd(d, rng);
    Eigen::VectorXd x = random_vec(d, rng), y = random_vec(d, rng);
    EXPECT_NEAR(mahalanobis_distance(x, y, PsdMatrix(a)), brute_quadratic(x - y, a), 1e-10);
  }
}

TEST(Mahalanobis, DimensionMismatchRejected) {
  EXPECT_THROW(mahalanobis_distance(Eigen::Vector2d(1, 0), Eigen::Vector3d(0, 0, 0),
                                    PsdMatrix::identity(2)),
               ValidationError);
}

TEST(MahalanobisProperty, SymmetricNonNegativeAndTriangle) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 10000; ++t) {
    const Eigen::Index d = 3;
    Eigen::MatrixXd a = random_lower_psd(d, rng);
    PsdMatrix p(a);
    Eigen::VectorXd x = random_vec(d, rng), y = random_vec(d, rng), z = random_vec(d, rng);
    const double xy = mahalanobis_distance(x, y, p);
    EXPECT_EQ(xy, mahalanobis_distance(y, x, p));
    EXPECT_GE(xy, 0.0);
    if (t % 10 == 0) {
      const double lhs = std::sqrt(xy);
      const double rhs =
          std::sqrt(mahalanobis_distance(x, z, p)) + std::sqrt(mahalanobis_distance(z, y, p));
      EXPECT_LE(lhs, rhs + 1e-8);
    }
  }
}

TEST(Contribution, ZeroDifferenceIsZero) {
  Eigen::MatrixXd c = contribution_matrix(Eigen::Vector2d(3, 4), Eigen::Vector2d(3, 4),
                                          Eigen::Matrix2d::Identity());
  EXPECT_TRUE(c.isZero(0.0));
}

TEST(Contribution, HandExpandedTwoByTwo) {
  Eigen::Matrix2d a;
  a << 1, 0.5, 0.5, 1;
  Eigen::MatrixXd c = contribution_matrix(Eigen::Vector2d(1, -1), Eigen::Vector2d(0, 0), a);
  Eigen::Matrix2d want;
  want << 1, -0.5, -0.5, 1;
  EXPECT_TRUE(c.isApprox(want, 1e-15));
  EXPECT_DOUBLE_EQ(c.sum(), 1.0);
}

TEST(Contribution, WordSubstitutionConfinedToChangedWords) {
  InstancePair p{Instance::sentence("the cat sat on the mat"),
                 Instance::sentence("the dog sat on the mat")};
  Representation rep = Representation::for_pair(p, Schema::tokens());
  const auto d = static_cast<Eigen::Index>(rep.dimension());
  std::mt19937_64 rng(2);
  Eigen::MatrixXd a = random_lower_psd(d, rng);
  Eigen::MatrixXd c = contribution_matrix(rep.map(p.left).values, rep.map(p.right).values, a);
  const auto cat = static_cast<Eigen::Index>(*rep.vocabulary().index_of("cat"));
  const auto dog = static_cast<Eigen::Index>(*rep.vocabulary().index_of("dog"));
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      const bool inside = (i == cat || i == dog) && (j == cat || j == dog);
      if (!inside) {
        EXPECT_EQ(c(i, j), 0.0) << i << "," << j;
      }
    }
  }
  EXPECT_NE(c(cat, cat), 0.0);
}

TEST(ContributionProperty, TotalEqualsDistance) {
  std::mt19937_64 rng(9);
  for (int t = 0; t < 500; ++t) {
    const Eigen::Index d = 1 + static_cast<Eigen::Index>(rng() % 6);
    Eigen::MatrixXd a = random_lower_psd(d, rng);
    Eigen::VectorXd x = random_vec(d, rng), y = random_vec(d, rng);
    Eigen::MatrixXd c = contribution_matrix(x, y, a);
    EXPECT_NEAR(c.sum(), mahalanobis_distance(x, y, PsdMatrix(a)), 1e-10);
    EXPECT_TRUE(feature_contributions(c).isApprox(c.colwise().sum().transpose(), 1e-12));
  }
}

TEST(Similarity, Endpoints) {
  EXPECT_EQ(similarity_from_distance(0.0), 1.0);
  EXPECT_EQ(similarity_from_distance(2.5, 2.5), 0.0);
  EXPECT_THROW(similarity_from_distance(1.0, 0.0), ValidationError);
}

TEST(Similarity, ContributionTransformSumsToSimilarity) {
  Eigen::Matrix2d c;
  c << 0.1, 0.05, 0.05, 0.2;  // sums to 0.4
  SimilarityExplanation s = similarity_from_distance(c, 1.0);
  EXPECT_NEAR(s.contributions.sum(), 0.6, 1e-15);
  EXPECT_NEAR(s.similarity, 0.6, 1e-15);
  EXPECT_NEAR(s.contributions(0, 0), 0.25 - 0.1, 1e-15);
}

}  // namespace
}  // namespace simexplain
