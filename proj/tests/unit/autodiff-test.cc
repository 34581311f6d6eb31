// tests/unit/autodiff-test.cc

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

#include "support/grad-check.h"
#include "tta/autodiff/ops.h"
#include "tta/base/error.h"

namespace tta::ad {
namespace {

using testing::CheckGradients;
using testing::ForAll;
using testing::Gen;

constexpr double kTol = 1e-6;

// Reduces any tensor to a scalar with fixed random weights so every output
// element contributes a distinct sensitivity.
Var Project(Tape &tape, const Var &x, std::uint64_t seed = 99) {
  Gen g(seed);
  Tensor w(x.value().shape());
  for (auto &v : w.storage()) v = g.Normal();
  return Dot(x, tape.Constant(w));
}

TEST(Tape, ConstantsReceiveNoGradient) {
  Tape tape;
  Var a = tape.Variable(Tensor::Vector({1, 2}));
  Var b = tape.Constant(Tensor::Vector({3, 4}));
  Var s = Dot(a, b);
  tape.Backward(s);
  EXPECT_EQ(tape.Grad(a).storage(), (std::vector<double>{3, 4}));
  EXPECT_EQ(tape.Grad(b).storage(), (std::vector<double>{0, 0}));
}

TEST(Tape, BackwardNeedsScalarRoot) {
  Tape tape;
  Var a = tape.Variable(Tensor::Vector({1, 2}));
  EXPECT_THROW(tape.Backward(a), Error);
}

TEST(Tape, InferenceModeRecordsValuesOnly) {
  Tape tape(false);
  Var a = tape.Variable(Tensor::Vector({1, 2}));
  Var s = Sum(Mul(a, a));
  EXPECT_EQ(s.value()[0], 5.0);
  EXPECT_FALSE(s.requires_grad());
}

TEST(Tape, SharedSubexpressionsAccumulate) {
  Tape tape;
  Var a = tape.Variable(Tensor::Scalar(3.0));
  Var s = Add(Mul(a, a), a);  // a^2 + a
  tape.Backward(s);
  EXPECT_EQ(tape.Grad(a)[0], 7.0);
}

struct UnaryCase {
  const char *name;
  std::function<Var(const Var &)> op;
};

TEST(Ops, ElementwiseGradients) {
  const std::vector<UnaryCase> cases = {
      {"gelu", [](const Var &x) { return Gelu(x); }},
      {"softplus", [](const Var &x) { return Softplus(x); }},
      {"tanh", [](const Var &x) { return Tanh(x); }},
      {"scale", [](const Var &x) { return Scale(x, -2.5); }},
      {"add_scalar", [](const Var &x) { return AddScalar(x, 0.3); }},
      {"standardize", [](const Var &x) { return Standardize(x); }},
      {"l2norm", [](const Var &x) { return L2NormalizeRows(x); }},
      {"mean_rows", [](const Var &x) { return MeanRows(x); }},
      {"reshape", [](const Var &x) { return Reshape(x, {x.value().size()}); }},
  };
  for (const auto &c : cases) {
    SCOPED_TRACE(c.name);
    ForAll(5, [&](Gen &g) {
      auto f = [&](Tape &t, const std::vector<Var> &v) {
        return Project(t, c.op(v[0]));
      };
      const auto r = CheckGradients(f, {g.RandomTensor({3, 4})});
      EXPECT_LT(r.max_rel_error, kTol);
    });
  }
}

TEST(Ops, BinaryGradients) {
  ForAll(5, [](Gen &g) {
    auto check = [&](const char *name, auto op, std::vector<Tensor> in) {
      SCOPED_TRACE(name);
      auto f = [&](Tape &t, const std::vector<Var> &v) {
        return Project(t, op(v));
      };
      EXPECT_LT(CheckGradients(f, in).max_rel_error, kTol);
    };
    check("add", [](auto &v) { return Add(v[0], v[1]); },
          {g.RandomTensor({2, 3}), g.RandomTensor({2, 3})});
    check("sub", [](auto &v) { return Sub(v[0], v[1]); },
          {g.RandomTensor({2, 3}), g.RandomTensor({2, 3})});
    check("mul", [](auto &v) { return Mul(v[0], v[1]); },
          {g.RandomTensor({2, 3}), g.RandomTensor({2, 3})});
    check("add_bias", [](auto &v) { return AddBias(v[0], v[1]); },
          {g.RandomTensor({4, 3}), g.RandomTensor({3})});
    check("matmul", [](auto &v) { return MatMul(v[0], v[1]); },
          {g.RandomTensor({3, 4}), g.RandomTensor({4, 2})});
    check("matmul_ta", [](auto &v) { return MatMul(v[0], v[1], true, false); },
          {g.RandomTensor({4, 3}), g.RandomTensor({4, 2})});
    check("matmul_tb", [](auto &v) { return MatMul(v[0], v[1], false, true); },
          {g.RandomTensor({3, 4}), g.RandomTensor({2, 4})});
    check("linear", [](auto &v) { return Linear(v[0], v[1], v[2]); },
          {g.RandomTensor({5, 3}), g.RandomTensor({3, 2}), g.RandomTensor({2})});
    check("layer_norm", [](auto &v) { return LayerNorm(v[0], v[1], v[2]); },
          {g.RandomTensor({4, 6}), g.RandomTensor({6}), g.RandomTensor({6})});
    check("cosine", [](auto &v) { return Cosine(v[0], v[1]); },
          {g.RandomTensor({7}), g.RandomTensor({7})});
    check("row_cosine", [](auto &v) { return RowCosine(v[0], v[1]); },
          {g.RandomTensor({3, 5}), g.RandomTensor({3, 5})});
    check("mse", [](auto &v) { return MeanSquaredError(v[0], v[1]); },
          {g.RandomTensor({9}), g.RandomTensor({9})});
  });
}

TEST(Ops, AttentionGradient) {
  ForAll(3, [](Gen &g) {
    auto f = [](Tape &t, const std::vector<Var> &v) {
      return Project(t, MultiHeadAttention(v[0], v[1], v[2], 2));
    };
    const auto r = CheckGradients(
        f, {g.RandomTensor({5, 4}), g.RandomTensor({5, 4}), g.RandomTensor({5, 4})});
    EXPECT_LT(r.max_rel_error, kTol);
  });
}

TEST(Ops, AttentionWithIdenticalKeysAveragesValues) {
  Tape tape(false);
  Var q = tape.Constant(Tensor({3, 2}, std::vector<double>{1, 2, 3, 4, 5, 6}));
  Var k = tape.Constant(Tensor({3, 2}, 1.0));
  Var v = tape.Constant(Tensor({3, 2}, std::vector<double>{0, 3, 3, 6, 6, 9}));
  Var out = MultiHeadAttention(q, k, v, 1);
  for (std::size_t r = 0; r < 3; ++r) {
    EXPECT_NEAR(out.value().at(r, 0), 3.0, 1e-12);
    EXPECT_NEAR(out.value().at(r, 1), 6.0, 1e-12);
  }
}

TEST(Ops, ConvGradient) {
  ForAll(3, [](Gen &g) {
    for (std::size_t dil : {1u, 2u}) {
      auto f = [dil](Tape &t, const std::vector<Var> &v) {
        return Project(t, Conv2d(v[0], v[1], v[2], dil));
      };
      const auto r = CheckGradients(
          f, {g.RandomTensor({2, 5, 6}), g.RandomTensor({3, 2, 3, 3}),
              g.RandomTensor({3})});
      EXPECT_LT(r.max_rel_error, kTol);
    }
  });
}

TEST(Ops, FrameCropSumGradients) {
  ForAll(3, [](Gen &g) {
    auto f = [](Tape &t, const std::vector<Var> &v) {
      return Project(t, Frame(Crop(v[0], 2, 15), 6, 4));
    };
    EXPECT_LT(CheckGradients(f, {g.RandomTensor({20})}).max_rel_error, kTol);
  });
}

TEST(Ops, FrameCountAndPadding) {
  Tape tape(false);
  Var x = tape.Constant(Tensor::Vector({1, 2, 3, 4, 5}));
  Var f = Frame(x, 4, 2);  // ceil((5 - 4) / 2) + 1 = 2 frames
  ASSERT_EQ(f.value().rows(), 2u);
  EXPECT_EQ(f.value().at(1, 0), 3.0);
  EXPECT_EQ(f.value().at(1, 3), 0.0);
}

TEST(Ops, RowCosineZeroRowGivesZero) {
  Tape tape;
  Var a = tape.Variable(Tensor({2, 2}, std::vector<double>{0, 0, 1, 0}));
  Var b = tape.Constant(Tensor({2, 2}, std::vector<double>{1, 1, 1, 0}));
  Var c = RowCosine(a, b);
  EXPECT_EQ(c.value()[0], 0.0);
  EXPECT_NEAR(c.value()[1], 1.0, 1e-15);
  tape.Backward(Sum(c));
  EXPECT_EQ(tape.Grad(a)[0], 0.0);
  EXPECT_EQ(tape.Grad(a)[1], 0.0);
}

TEST(Ops, LayerNormRowsHaveZeroMeanUnitVariance) {
  Gen g(3);
  Tape tape(false);
  Var x = tape.Constant(g.RandomTensor({4, 16}, 3.0));
  Var y = LayerNorm(x, tape.Constant(Tensor({16}, 1.0)),
                    tape.Constant(Tensor({16}, 0.0)));
  for (std::size_t r = 0; r < 4; ++r) {
    double m = 0, v = 0;
    for (std::size_t c = 0; c < 16; ++c) m += y.value().at(r, c) / 16;
    for (std::size_t c = 0; c < 16; ++c)
      v += (y.value().at(r, c) - m) * (y.value().at(r, c) - m) / 16;
    EXPECT_NEAR(m, 0.0, 1e-12);
    EXPECT_NEAR(v, 1.0, 1e-4);
  }
}

TEST(Ops, ShapeErrors) {
  Tape tape;
  Var a = tape.Variable(Tensor({2, 3}));
  Var b = tape.Variable(Tensor({3, 2}));
  EXPECT_THROW(Add(a, b), Error);
  EXPECT_THROW(MatMul(a, a), Error);
  Tape other;
  Var c = other.Variable(Tensor({2, 3}));
  EXPECT_THROW(Add(a, c), Error);
}

}  // namespace
}  // namespace tta::ad
