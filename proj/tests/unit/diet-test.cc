// tests/unit/diet-test.cc

// Copyright 2026  The latent-tta Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <chrono>
#include <random>

#include "support/diet-synth.h"
#include "support/test-util.h"
#include "tta/base/error.h"
#include "tta/base/io-util.h"
#include "tta/diet/diet.h"

namespace tta::diet {
namespace {

using Eigen::MatrixXd;
using testing::ScratchDir;

MatrixXd Random(Eigen::Index r, Eigen::Index c, std::mt19937_64 &rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  MatrixXd m(r, c);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = n(rng);
  return m;
}

ErrorCode CodeOf(const std::function<void()> &f) {
  try {
    f();
  } catch (const Error &e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::kIo;
}

embed::EmbeddingCache ToCache(const MatrixXd &m, embed::Role role,
                              const std::string &encoder = "enc") {
  embed::EmbeddingCache c;
  c.encoder_id = encoder;
  c.dim = static_cast<std::size_t>(m.rows());
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    c.records.push_back({"u" + std::to_string(j), role,
                         {m.col(j).data(), m.col(j).data() + m.rows()}});
  return c;
}

FitOptions WithRidge(double ridge) {
  FitOptions o;
  o.ridge = ridge;
  return o;
}

FitOptions Affine() {
  FitOptions o;
  o.affine = true;
  return o;
}

TEST(DietFit, ExactRecoveryIsFast) {
  std::mt19937_64 rng(1);
  const MatrixXd m = Random(32, 32, rng), y = Random(32, 128, rng);
  const auto start = std::chrono::steady_clock::now();
  const DietMap a = FitMatrices(m * y, y);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  EXPECT_LT((a.matrix - m).norm() / m.norm(), 1e-8);
  EXPECT_LT(secs, 1.0);
  EXPECT_EQ(a.k_samples, 128u);
  EXPECT_FALSE(a.rank_deficient);
  EXPECT_LT(a.fit_residual, 1e-20);
}

TEST(DietFit, ExactRecoveryProperty) {
  testing::ForAll(10, [](testing::Gen &g) {
    const Eigen::Index d = static_cast<Eigen::Index>(g.Size(2, 40));
    const MatrixXd m = Random(d, d, g.rng()), y = Random(d, 4 * d, g.rng());
    EXPECT_LT((FitMatrices(m * y, y).matrix - m).norm() / m.norm(), 1e-8);
  });
}

TEST(DietFit, IdenticalCachesGiveIdentity) {
  std::mt19937_64 rng(2);
  const MatrixXd y = Random(16, 64, rng);
  const DietMap a = FitMatrices(y, y);
  EXPECT_LT((a.matrix - MatrixXd::Identity(16, 16)).norm(), 1e-8);
}

TEST(DietFit, LeastSquaresOptimality) {
  std::mt19937_64 rng(3);
  const MatrixXd x = Random(12, 60, rng), y = Random(12, 60, rng);
  const DietMap a = FitMatrices(x, y);
  const double best = (x - a.matrix * y).norm();
  for (int i = 0; i < 100; ++i) {
    MatrixXd dir = Random(12, 12, rng);
    dir *= 1e-3 / dir.norm();
    EXPECT_GE((x - (a.matrix + dir) * y).norm(), best);
  }
}

TEST(DietFit, RidgeShrinksAndMatchesNormalEquations) {
  std::mt19937_64 rng(4);
  const MatrixXd x = Random(8, 40, rng), y = Random(8, 40, rng);
  const double lambda = 0.5;
  const DietMap a = FitMatrices(x, y, WithRidge(lambda));
  const MatrixXd ref =
      x * y.transpose() *
      (y * y.transpose() + lambda * MatrixXd::Identity(8, 8)).inverse();
  EXPECT_LT((a.matrix - ref).norm() / ref.norm(), 1e-10);
  EXPECT_LT(a.matrix.norm(), FitMatrices(x, y).matrix.norm());
  EXPECT_EQ(a.ridge, lambda);
}

TEST(DietFit, FewSamplesNeedRidge) {
  std::mt19937_64 rng(5);
  const MatrixXd x = Random(16, 8, rng), y = Random(16, 8, rng);
  EXPECT_EQ(CodeOf([&] { FitMatrices(x, y); }), ErrorCode::kInvalidArgument);
  const DietMap a = FitMatrices(x, y, WithRidge(1e-3));
  EXPECT_EQ(a.k_samples, 8u);
  EXPECT_TRUE(a.matrix.allFinite());
}

TEST(DietFit, RankDeficientFallsBackToMinimumNorm) {
  std::mt19937_64 rng(6);
  MatrixXd y = Random(6, 30, rng);
  y.row(5) = y.row(0) + y.row(1);  // rank 5
  const MatrixXd x = Random(6, 30, rng);
  const DietMap a = FitMatrices(x, y);
  EXPECT_TRUE(a.rank_deficient);
  const Eigen::JacobiSVD<MatrixXd> svd(y, Eigen::ComputeThinU | Eigen::ComputeThinV);
  Eigen::VectorXd s = svd.singularValues();
  for (Eigen::Index i = 0; i < s.size(); ++i) s[i] = s[i] > 1e-9 ? 1.0 / s[i] : 0.0;
  const MatrixXd pinv = svd.matrixV() * s.asDiagonal() * svd.matrixU().transpose();
  EXPECT_LT((a.matrix - x * pinv).norm() / a.matrix.norm(), 1e-8);
}

TEST(DietFit, AffineVariantRecoversBias) {
  std::mt19937_64 rng(7);
  const MatrixXd m = Random(5, 5, rng), y = Random(5, 50, rng);
  const Eigen::VectorXd b = Random(5, 1, rng).col(0);
  const MatrixXd x = (m * y).colwise() + b;
  const DietMap a = FitMatrices(x, y, Affine());
  ASSERT_TRUE(a.affine());
  EXPECT_LT((a.matrix - m).norm(), 1e-8);
  EXPECT_LT((a.bias - b).norm(), 1e-8);
  EXPECT_FALSE(FitMatrices(x, y).affine());
}

TEST(DietApply, HandCasesAndLinearity) {
  DietMap m;
  m.matrix.resize(2, 2);
  m.matrix << 1, 2, 3, 4;
  EXPECT_EQ(ApplyVector(m, {1, 1}), (std::vector<double>{3, 7}));
  EXPECT_EQ(ApplyVector(m, {0, 0}), (std::vector<double>{0, 0}));
  DietMap id;
  id.matrix = MatrixXd::Identity(3, 3);
  EXPECT_EQ(ApplyVector(id, {0.5, -2, 3}), (std::vector<double>{0.5, -2, 3}));
  EXPECT_EQ(CodeOf([&] { ApplyVector(m, {1, 2, 3}); }), ErrorCode::kInvalidArgument);

  testing::ForAll(20, [&](testing::Gen &g) {
    const auto u = g.Vector(2), v = g.Vector(2);
    const double a = g.Normal(), b = g.Normal();
    const auto lhs = ApplyVector(m, {a * u[0] + b * v[0], a * u[1] + b * v[1]});
    const auto au = ApplyVector(m, u), av = ApplyVector(m, v);
    for (int i = 0; i < 2; ++i) EXPECT_NEAR(lhs[i], a * au[i] + b * av[i], 1e-12);
  });
}

TEST(DietApply, EncoderGuard) {
  DietMap m;
  m.matrix = MatrixXd::Identity(2, 2);
  m.encoder_id = "enc-a";
  embed::Embedding e{{1, 2}, "enc-b", "u"};
  EXPECT_EQ(CodeOf([&] { Apply(m, e); }), ErrorCode::kEncoderConflict);
  e.encoder_id = "enc-a";
  EXPECT_EQ(Apply(m, e).vector, e.vector);
}

TEST(DietEvaluate, ExactFitAndIdentity) {
  std::mt19937_64 rng(8);
  const MatrixXd m = Random(10, 10, rng), y = Random(10, 50, rng);
  const MatrixXd x = m * y;
  const DietMap a = FitMatrices(x, y);
  const DietReport r = EvaluateMatrices(a, x, y);
  EXPECT_GE(r.mean_sim_transformed, 0.9999);
  EXPECT_EQ(r.count, 50u);
  DietMap id;
  id.matrix = MatrixXd::Identity(10, 10);
  const DietReport ri = EvaluateMatrices(id, x, y);
  EXPECT_EQ(ri.mean_sim_noisy, ri.mean_sim_transformed);
}

TEST(DietEvaluate, ZeroNormEmbeddingsAreExcluded) {
  std::mt19937_64 rng(9);
  MatrixXd x = Random(4, 20, rng), y = Random(4, 20, rng);
  y.col(3).setZero();
  x.col(7).setZero();
  const DietMap a = FitMatrices(x, y);
  const DietReport r = EvaluateMatrices(a, x, y);
  EXPECT_EQ(r.excluded, 2u);
  EXPECT_EQ(r.count, 18u);
}

TEST(DietEvaluate, SimilaritiesAreBounded) {
  testing::ForAll(20, [](testing::Gen &g) {
    const Eigen::Index d = static_cast<Eigen::Index>(g.Size(2, 12));
    const MatrixXd x = Random(d, 3 * d, g.rng()), y = Random(d, 3 * d, g.rng());
    const DietReport r = EvaluateMatrices(FitMatrices(x, y), x, y);
    for (double s : {r.mean_sim_noisy, r.mean_sim_transformed}) {
      EXPECT_GE(s, -1.0);
      EXPECT_LE(s, 1.0);
    }
  });
}

TEST(DietEvaluate, TransformGeneralizesToShiftedDomains) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    std::mt19937_64 rng(seed);
    const MatrixXd m = testing::SharedMap(32, rng);
    const auto source = testing::MakeDomain(m, 256, 1.0, 1.0, 0.05, rng);
    const auto target = testing::MakeDomain(m, 128, 2.0, 1.5, 0.05, rng);
    const DietMap a = FitMatrices(source.clean, source.noisy);
    const DietReport r = EvaluateMatrices(a, target.clean, target.noisy);
    EXPECT_GT(r.mean_sim_transformed, r.mean_sim_noisy) << "seed " << seed;
  }
}

TEST(DietCaches, AlignmentAndEncoderChecks) {
  std::mt19937_64 rng(10);
  const MatrixXd m = Random(4, 4, rng), y = Random(4, 12, rng);
  const auto clean = ToCache(m * y, embed::Role::kClean);
  const auto noisy = ToCache(y, embed::Role::kNoisy);
  const DietMap a = Fit(clean, noisy);
  EXPECT_LT((a.matrix - m).norm(), 1e-8);
  EXPECT_EQ(a.encoder_id, "enc");
  EXPECT_GE(Evaluate(a, clean, noisy).mean_sim_transformed, 0.9999);

  // One cache holding both roles.
  embed::EmbeddingCache both = clean;
  both.records.insert(both.records.end(), noisy.records.begin(), noisy.records.end());
  EXPECT_LT((Fit(both, both).matrix - m).norm(), 1e-8);

  auto shuffled = noisy;
  std::swap(shuffled.records[0], shuffled.records[1]);
  EXPECT_EQ(CodeOf([&] { Fit(clean, shuffled); }), ErrorCode::kAlignmentError);
  auto shorter = noisy;
  shorter.records.pop_back();
  EXPECT_EQ(CodeOf([&] { Fit(clean, shorter); }), ErrorCode::kAlignmentError);
  EXPECT_EQ(CodeOf([&] { Fit(clean, ToCache(y, embed::Role::kNoisy, "other")); }),
            ErrorCode::kEncoderConflict);
  EXPECT_EQ(CodeOf([&] { Evaluate(a, clean, ToCache(y, embed::Role::kNoisy, "other")); }),
            ErrorCode::kEncoderConflict);
}

TEST(DietFile, RoundTripAndCorruption) {
  ScratchDir dir;
  std::mt19937_64 rng(11);
  const MatrixXd x = Random(6, 30, rng), y = Random(6, 30, rng);
  DietMap a = FitMatrices(x, y, {.ridge = 0.1, .source_manifest_id = "man"});
  a.encoder_id = "enc";
  SaveDiet(a, dir / "a.diet");
  const DietMap b = LoadDiet(dir / "a.diet");
  EXPECT_EQ(b.matrix, a.matrix);
  EXPECT_EQ(b.encoder_id, "enc");
  EXPECT_EQ(b.source_manifest_id, "man");
  EXPECT_EQ(b.k_samples, 30u);
  EXPECT_EQ(b.ridge, 0.1);
  EXPECT_EQ(b.fit_residual, a.fit_residual);
  SaveDiet(b, dir / "b.diet");
  EXPECT_EQ(FileCrc32Hex(dir / "a.diet"), FileCrc32Hex(dir / "b.diet"));

  DietMap affine = FitMatrices(x, y, Affine());
  SaveDiet(affine, dir / "c.diet");
  EXPECT_EQ(LoadDiet(dir / "c.diet").bias, affine.bias);

  const std::string bytes = ReadTextFile(dir / "a.diet");
  WriteTextFile(dir / "t.diet", bytes.substr(0, bytes.size() - 8));
  EXPECT_EQ(CodeOf([&] { LoadDiet(dir / "t.diet"); }), ErrorCode::kCorruptFile);
  std::string flipped = bytes;
  flipped[flipped.size() - 5] ^= 0x10;
  WriteTextFile(dir / "f.diet", flipped);
  EXPECT_EQ(CodeOf([&] { LoadDiet(dir / "f.diet"); }), ErrorCode::kCorruptFile);
}

}  // namespace
}  // namespace tta::diet
