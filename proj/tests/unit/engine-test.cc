// tests/unit/engine-test.cc

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

#include <cmath>
#include <numeric>
#include <set>
#include <type_traits>

#include "support/test-util.h"
#include "tta/autodiff/ops.h"
#include "tta/base/error.h"
#include "tta/base/io-util.h"
#include "tta/data/manifest.h"
#include "tta/data/stream.h"
#include "tta/data/synth.h"
#include "tta/diet/diet.h"
#include "tta/embed/toy-encoder.h"
#include "tta/engine/adapt.h"
#include "tta/engine/losses.h"
#include "tta/engine/run.h"
#include "tta/model/am-model.h"
#include "tta/model/checkpoint.h"
#include "tta/signal/envelope.h"

namespace tta::engine {
namespace {

using testing::Gen;
using testing::ScratchDir;

// Adaptation only ever receives noisy signals: the step functions are not
// callable with labelled pairs, and a noisy view carries exactly an id and
// a waveform.
static_assert(!std::is_invocable_v<decltype(&RemixItStep), model::SeModel *,
                                   model::SeModel *, AdaptState *,
                                   const std::vector<data::UtterancePair> &,
                                   std::mt19937_64 &, const RemixItConfig &>);
static_assert(!std::is_invocable_v<decltype(&PrepareLadenInput),
                                   const data::UtterancePair &,
                                   const diet::DietMap &, const embed::Encoder &,
                                   const LadenConfig &>);
static_assert(std::is_same_v<decltype(LadenInput::utterance), data::NoisyUtterance>);

TEST(LabelFirewall, NoisyViewCarriesIdAndWaveformOnly) {
  // Compiles only while the view has exactly these two members.
  auto [id, noisy] = data::NoisyUtterance{"u", {{0.5}, 16000}};
  EXPECT_EQ(id, "u");
  EXPECT_EQ(noisy.size(), 1u);
}

const embed::ToyEncoder &Encoder() {
  static const embed::ToyEncoder enc =
      embed::ToyEncoder::Create({.dim = 16, .seed = 3});
  return enc;
}

diet::DietMap IdentityDiet() {
  diet::DietMap m;
  m.matrix = Eigen::MatrixXd::Identity(16, 16);
  m.encoder_id = Encoder().spec().encoder_id;
  return m;
}

model::AmConfig SmallAm() {
  model::AmConfig c;
  c.n_blocks = 1;
  c.hidden = 16;
  c.heads = 2;
  c.conv_channels = 2;
  c.fft_size = 128;
  c.hop = 64;
  c.seed = 4;
  return c;
}

std::vector<double> Normalized(std::vector<double> v) {
  double n = 0;
  for (double x : v) n += x * x;
  for (double &x : v) x /= std::sqrt(n);
  return v;
}

data::NoisyUtterance Utt(Gen &g, std::size_t n, const std::string &id = "u") {
  signal::Waveform w = g.Tone(n);
  for (double &v : w.samples) v += g.Normal(0.02);
  return {id, w};
}

// ---------------------------------------------------------------------------
// Loss algebra

TEST(LatentLoss, Anchors) {
  Gen g(1);
  const signal::Waveform x = g.Tone(3200);
  const std::vector<double> e = Encoder().Encode(x).vector;
  std::vector<double> r = g.Vector(16);
  const std::vector<double> en = Normalized(e);
  double proj = 0;
  for (int i = 0; i < 16; ++i) proj += r[i] * en[i];
  for (int i = 0; i < 16; ++i) r[i] -= proj * en[i];
  std::vector<double> neg = e;
  for (double &v : neg) v = -v;
  std::vector<double> scaled = e;
  for (double &v : scaled) v *= 3.5;

  auto loss = [&](const std::vector<double> &label) {
    ad::Tape tape(false);
    return LatentLoss(tape.Constant(Tensor::Vector(x.samples)), label, Encoder())
        .value()[0];
  };
  EXPECT_NEAR(loss(e), 0.0, 1e-9);
  EXPECT_NEAR(loss(scaled), 0.0, 1e-9);
  EXPECT_NEAR(loss(r), 1.0, 1e-9);
  EXPECT_NEAR(loss(neg), 2.0, 1e-9);
  try {
    loss(std::vector<double>(16, 0.0));
    FAIL();
  } catch (const Error &err) {
    EXPECT_EQ(err.code(), ErrorCode::kDegenerateEmbedding);
  }
}

TEST(LatentLoss, RangeProperty) {
  testing::ForAll(20, [](Gen &g) {
    const signal::Waveform x = g.Tone(g.Size(320, 4000));
    ad::Tape tape(false);
    const double v =
        LatentLoss(tape.Constant(Tensor::Vector(x.samples)), g.Vector(16), Encoder())
            .value()[0];
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 2.0);
  });
}

TEST(CombineLosses, GateAndWeights) {
  ad::Tape tape(false);
  LadenConfig cfg;  // lambda 0.1, gamma 0.05
  auto c = [&](double ld, double r, const LadenConfig &k) {
    return CombineLosses(tape.Constant(Tensor::Vector({ld})),
                         tape.Constant(Tensor::Vector({r})), k);
  };
  LadenLoss a = c(0.04, 0.8, cfg);
  EXPECT_FALSE(a.gated);
  EXPECT_NEAR(a.total.value()[0], 0.04 + 0.1 * (1.0 - 0.8), 1e-15);
  EXPECT_EQ(a.l_ld, 0.04);
  EXPECT_EQ(a.l_r, 0.8);
  LadenLoss b = c(0.06, 0.8, cfg);
  EXPECT_TRUE(b.gated);
  EXPECT_EQ(b.total.value()[0], 0.0);
  EXPECT_EQ(b.l_ld, 0.06);
  LadenConfig no_env = cfg;
  no_env.lambda = 0.0;
  EXPECT_EQ(c(0.03, -0.5, no_env).total.value()[0], 0.03);
  EXPECT_FALSE(c(0.05, 0.0, cfg).gated);  // the threshold itself passes
}

TEST(LadenConfig, Validation) {
  LadenConfig c;
  EXPECT_NO_THROW(c.Validate());
  for (auto bad : std::vector<std::function<void(LadenConfig &)>>{
           [](LadenConfig &k) { k.lambda = -1; },
           [](LadenConfig &k) { k.gamma = 0; },
           [](LadenConfig &k) { k.tau = 0; },
           [](LadenConfig &k) { k.beta = 1.5; },
           [](LadenConfig &k) { k.beta = -0.1; }}) {
    LadenConfig k;
    bad(k);
    EXPECT_THROW(k.Validate(), Error);
  }
}

// ---------------------------------------------------------------------------
// Frame weights and the envelope term

TEST(FrameWeights, SumToOneAndSingleFrame) {
  testing::ForAll(20, [](Gen &g) {
    const auto x = g.Vector(g.Size(1, 5000), g.Uniform(0.01, 3));
    const double tau = g.Uniform(0.05, 5);
    const FrameWeights w = ComputeFrameWeights(x, 512, 256, tau);
    EXPECT_EQ(w.rho.size(), signal::NumFrames(x.size(), 512, 256));
    double s = 0;
    for (double r : w.rho) {
      EXPECT_GE(r, 0.0);
      s += r;
    }
    EXPECT_NEAR(s, 1.0, 1e-9);
  });
  const FrameWeights one = ComputeFrameWeights(std::vector<double>(300, 0.1), 512, 256, 1.0);
  ASSERT_EQ(one.rho.size(), 1u);
  EXPECT_EQ(one.rho[0], 1.0);
  const FrameWeights flat = ComputeFrameWeights(std::vector<double>(2048, 0.0), 512, 256, 1.0);
  for (double r : flat.rho) EXPECT_NEAR(r, 1.0 / flat.rho.size(), 1e-15);
}

TEST(FrameWeights, SmallTemperatureIsOneHot) {
  Gen g(2);
  std::vector<double> x = g.Vector(512 * 8, 0.01);
  for (std::size_t i = 512 * 5; i < 512 * 6; ++i) x[i] *= 50;  // one loud frame
  const FrameWeights w = ComputeFrameWeights(x, 512, 512, 1e-6);
  ASSERT_EQ(w.rho.size(), 8u);
  for (std::size_t i = 0; i < 8; ++i) EXPECT_NEAR(w.rho[i], i == 5 ? 1.0 : 0.0, 1e-6);
}

TEST(Envelope, PerfectAlignmentScoresOne) {
  Gen g(3);
  const signal::Waveform x = g.Tone(4000);
  const signal::Waveform env = signal::HilbertEnvelope(x);
  LadenConfig cfg;
  ad::Tape tape(false);
  const EnvelopeResult r =
      EnvelopeSimilarity(tape.Constant(Tensor::Vector(x.samples)), env.samples, cfg);
  EXPECT_NEAR(r.similarity.value()[0], 1.0, 1e-12);
  EXPECT_FALSE(r.all_silent);
}

TEST(Envelope, SilentOutputIsFlagged) {
  LadenConfig cfg;
  ad::Tape tape(false);
  const EnvelopeResult r = EnvelopeSimilarity(
      tape.Constant(Tensor({2000}, 0.0)), std::vector<double>(2000, 0.3), cfg);
  EXPECT_TRUE(r.all_silent);
  EXPECT_EQ(r.similarity.value()[0], 0.0);
}

TEST(Envelope, RangeProperty) {
  testing::ForAll(10, [](Gen &g) {
    const std::size_t n = g.Size(600, 5000);
    const signal::Waveform x = g.Tone(n);
    LadenConfig cfg;
    cfg.tau = g.Uniform(0.1, 3);
    ad::Tape tape(false);
    const double v = EnvelopeSimilarity(tape.Constant(Tensor::Vector(x.samples)),
                                        ReferenceEnvelope(Utt(g, n).noisy, cfg), cfg)
                         .similarity.value()[0];
    EXPECT_GE(v, -1.0);
    EXPECT_LE(v, 1.0);
  });
}

TEST(Envelope, NoGradientThroughTheWeights) {
  Gen g(4);
  std::vector<double> x = g.Tone(2048).samples;
  for (std::size_t i = 1024; i < 1536; ++i) x[i] *= 3;  // uneven frame powers
  const std::vector<double> ref = signal::HilbertEnvelope(Utt(g, 2048).noisy).samples;
  LadenConfig cfg;
  const FrameWeights rho = ComputeFrameWeights(x, cfg.frame_len, cfg.hop, cfg.tau);

  ad::Tape tape;
  ad::Var xv = tape.Variable(Tensor::Vector(x));
  ad::Var s = EnvelopeSimilarity(xv, ref, cfg).similarity;
  tape.Backward(s);
  const Tensor grad = tape.Grad(xv);

  auto fixed = [&](const std::vector<double> &p) {
    ad::Tape t(false);
    return EnvelopeSimilarity(t.Constant(Tensor::Vector(p)), ref, rho, cfg).value()[0];
  };
  auto live = [&](const std::vector<double> &p) {
    ad::Tape t(false);
    return EnvelopeSimilarity(t.Constant(Tensor::Vector(p)), ref, cfg).similarity.value()[0];
  };
  double err_fixed = 0, err_live = 0, norm = 0;
  const double h = 1e-6;
  for (std::size_t i = 0; i < x.size(); i += 23) {
    std::vector<double> p = x;
    p[i] += h;
    const double uf = fixed(p), ul = live(p);
    p[i] -= 2 * h;
    const double df = (uf - fixed(p)) / (2 * h), dl = (ul - live(p)) / (2 * h);
    err_fixed += (df - grad[i]) * (df - grad[i]);
    err_live += (dl - grad[i]) * (dl - grad[i]);
    norm += grad[i] * grad[i];
  }
  EXPECT_LT(std::sqrt(err_fixed / norm), 1e-3);
  EXPECT_GT(std::sqrt(err_live / norm), 1e-2);
}

// ---------------------------------------------------------------------------
// Weight averaging

TEST(EmaMerge, ScalarCases) {
  for (auto [beta, expect] : std::vector<std::pair<double, double>>{
           {1.0, 2.0}, {0.0, 0.0}, {0.5, 1.0}}) {
    model::ParamSet p;
    p.Add("a", Tensor::Vector({2.0}));
    p.Add("b", Tensor::Vector({5.0}));
    EmaMerge(&p, {Tensor::Vector({0.0}), Tensor::Vector({-1.0})}, {true, false}, beta);
    EXPECT_EQ(p[0].value[0], expect);
    EXPECT_EQ(p[1].value[0], 5.0);
  }
}

TEST(EmaMerge, ContractsTowardTheSource) {
  testing::ForAll(20, [](Gen &g) {
    model::ParamSet p;
    p.Add("a", g.RandomTensor({g.Size(1, 20)}));
    p.Add("b", g.RandomTensor({g.Size(1, 20)}));
    const std::vector<Tensor> src = {g.RandomTensor(p[0].value.shape()),
                                     g.RandomTensor(p[1].value.shape())};
    auto dist = [&] {
      double s = 0;
      for (int k = 0; k < 2; ++k)
        for (std::size_t i = 0; i < src[k].size(); ++i)
          s += std::pow(p[k].value[i] - src[k][i], 2);
      return std::sqrt(s);
    };
    const double beta = g.Uniform(0, 1), before = dist();
    EmaMerge(&p, src, {true, true}, beta);
    EXPECT_NEAR(dist(), beta * before, 1e-12 * before);
  });
}

// ---------------------------------------------------------------------------
// LaDen steps

class LadenSteps : public ::testing::Test {
 protected:
  LadenSteps() : model_(SmallAm()), diet_(IdentityDiet()) {}
  LadenInput Input(Gen &g, std::size_t n = 1600) {
    return PrepareLadenInput(Utt(g, n), diet_, Encoder(), cfg_);
  }
  model::AmModel model_;
  diet::DietMap diet_;
  LadenConfig cfg_;
};

TEST_F(LadenSteps, PreparedTargetsComeFromTheNoisyInput) {
  Gen g(5);
  const data::NoisyUtterance u = Utt(g, 2000);
  const LadenInput in = PrepareLadenInput(u, diet_, Encoder(), cfg_);
  EXPECT_EQ(in.pseudo_label, Encoder().Encode(u.noisy).vector);
  EXPECT_EQ(in.reference_envelope,
            signal::HilbertEnvelope(signal::SpectralSubtraction(
                                        u.noisy, cfg_.frame_len, cfg_.hop, cfg_.subtraction))
                .samples);
}

TEST_F(LadenSteps, GatedStepChangesNothing) {
  Gen g(6);
  LadenInput in = Input(g);
  // Pseudo-label at cosine 0.94 to the output's embedding: L_LD = 0.06.
  const signal::Waveform out = model_.Enhance(in.utterance.noisy);
  const auto e = Normalized(Encoder().Encode(out).vector);
  std::vector<double> r = g.Vector(16);
  double proj = 0;
  for (int i = 0; i < 16; ++i) proj += r[i] * e[i];
  for (int i = 0; i < 16; ++i) r[i] -= proj * e[i];
  r = Normalized(r);
  for (int i = 0; i < 16; ++i)
    in.pseudo_label[i] = 0.94 * e[i] + std::sqrt(1 - 0.94 * 0.94) * r[i];

  AdaptState state(model_, {.lr = cfg_.lr});
  const std::string before = model_.params().Checksum();
  const StepResult s = LadenStep(&model_, &state, {in}, Encoder(), cfg_);
  EXPECT_NEAR(s.l_ld, 0.06, 1e-9);
  EXPECT_TRUE(s.gated);
  EXPECT_FALSE(s.updated);
  EXPECT_EQ(s.loss, 0.0);
  EXPECT_EQ(model_.params().Checksum(), before);
  EXPECT_EQ(state.skipped, 1u);
  EXPECT_EQ(state.updates, 0u);
  EXPECT_EQ(state.optimizer().steps(), 0u);
  EXPECT_EQ(s.outputs[0].samples, out.samples);
}

TEST_F(LadenSteps, HundredStepsLeaveFrozenWeightsAlone) {
  Gen g(7);
  AdaptState state(model_, {.lr = cfg_.lr});
  const std::vector<bool> frozen = [&] {
    std::vector<bool> f = state.mask();
    f.flip();
    return f;
  }();
  const std::string frozen_before = model_.params().Checksum(frozen);
  const std::string adaptable_before = model_.params().Checksum(state.mask());
  const std::string encoder_before = Encoder().WeightsChecksum();
  const std::vector<Tensor> source = state.theta_s();
  std::size_t updates = 0;
  for (int i = 0; i < 100; ++i)
    updates += LadenStep(&model_, &state, {Input(g)}, Encoder(), cfg_).updated;
  EXPECT_GT(updates, 50u);
  EXPECT_EQ(state.step, 100u);
  EXPECT_EQ(state.updates + state.skipped, 100u);
  EXPECT_EQ(model_.params().Checksum(frozen), frozen_before);
  EXPECT_NE(model_.params().Checksum(state.mask()), adaptable_before);
  EXPECT_EQ(Encoder().WeightsChecksum(), encoder_before);
  for (std::size_t i = 0; i < source.size(); ++i)
    EXPECT_EQ(state.theta_s()[i].storage(), source[i].storage());
  const model::ParamPartition part = model::PartitionParams(model_);
  EXPECT_EQ(state.adaptable_names(), part.adaptable);
}

TEST_F(LadenSteps, OutputsPrecedeTheUpdate) {
  Gen g(8);
  AdaptState state(model_, {.lr = 1e-2});
  for (int i = 0; i < 10; ++i) {
    const LadenInput in = Input(g);
    const signal::Waveform expect = model_.Enhance(in.utterance.noisy);
    const StepResult s = LadenStep(&model_, &state, {in}, Encoder(), cfg_);
    EXPECT_EQ(s.outputs[0].samples, expect.samples) << "step " << i;
  }
  EXPECT_GT(state.updates, 0u);
}

TEST_F(LadenSteps, ZeroBetaRevertsEveryStep) {
  Gen g(9);
  cfg_.beta = 0.0;
  const model::AmModel source = model_;
  AdaptState state(model_, {.lr = 1e-2});
  for (int i = 0; i < 10; ++i) {
    const LadenInput in = Input(g);
    const StepResult s = LadenStep(&model_, &state, {in}, Encoder(), cfg_);
    EXPECT_EQ(s.outputs[0].samples, source.Enhance(in.utterance.noisy).samples);
  }
  EXPECT_GT(state.updates, 0u);
  EXPECT_EQ(model_.params().Checksum(), source.params().Checksum());
}

TEST_F(LadenSteps, RaisingGammaNeverGatesMore) {
  std::vector<LadenInput> stream;
  Gen g(10);
  // A noisier input widens the spread of latent losses.
  for (int i = 0; i < 30; ++i) {
    data::NoisyUtterance u = Utt(g, 1600);
    for (double &v : u.noisy.samples) v += g.Normal(g.Uniform(0.0, 0.3));
    stream.push_back(PrepareLadenInput(u, diet_, Encoder(), cfg_));
  }
  std::size_t last = 0;
  for (double gamma : {0.005, 0.01, 0.02, 0.05, 0.1, 0.5}) {
    model::AmModel m(SmallAm());
    LadenConfig cfg = cfg_;
    cfg.gamma = gamma;
    AdaptState state(m, {.lr = cfg.lr});
    std::size_t ungated = 0;
    for (const auto &in : stream) ungated += !LadenStep(&m, &state, {in}, Encoder(), cfg).gated;
    EXPECT_GE(ungated, last) << "gamma " << gamma;
    last = ungated;
  }
  EXPECT_EQ(last, stream.size());
}

// ---------------------------------------------------------------------------
// RemixIT

TEST(RemixIt, DerangementsHaveNoFixedPoints) {
  std::mt19937_64 rng(1);
  for (std::size_t n = 2; n <= 10; ++n)
    for (int t = 0; t < 200; ++t) {
      const auto p = RandomDerangement(n, rng);
      std::set<std::size_t> seen(p.begin(), p.end());
      ASSERT_EQ(seen.size(), n);
      ASSERT_EQ(*seen.rbegin(), n - 1);
      for (std::size_t i = 0; i < n; ++i) ASSERT_NE(p[i], i);
    }
  EXPECT_EQ(RandomDerangement(1, rng), std::vector<std::size_t>{0});
  EXPECT_TRUE(RandomDerangement(0, rng).empty());
}

TEST(RemixIt, BootstrappedMixturesConserveTotals) {
  testing::ForAll(20, [](Gen &g) {
    const std::size_t n = g.Size(2, 8), len = g.Size(10, 500);
    std::vector<signal::Waveform> s, z;
    for (std::size_t k = 0; k < n; ++k) {
      s.push_back({g.Vector(len), 16000});
      z.push_back({g.Vector(len), 16000});
    }
    const auto sigma = RandomDerangement(n, g.rng());
    const auto mix = BootstrapMixtures(s, z, sigma);
    ASSERT_EQ(mix.size(), n);
    for (std::size_t i = 0; i < len; ++i) {
      double lhs = 0, rhs = 0;
      for (std::size_t k = 0; k < n; ++k) {
        lhs += mix[k].samples[i];
        rhs += s[k].samples[i] + z[k].samples[i];
        ASSERT_EQ(mix[k].samples[i], s[k].samples[i] + z[sigma[k]].samples[i]);
      }
      EXPECT_NEAR(lhs, rhs, 1e-9);
    }
  });
}

TEST(RemixIt, NoiseIsTiledOrCropped) {
  EXPECT_EQ(FitNoiseLength({1, 2, 3}, 7), (std::vector<double>{1, 2, 3, 1, 2, 3, 1}));
  EXPECT_EQ(FitNoiseLength({1, 2, 3}, 2), (std::vector<double>{1, 2}));
}

TEST(RemixIt, TeacherScheduleAndStudentLearning) {
  model::AmModel student(SmallAm());
  auto teacher = student.Clone();
  RemixItConfig cfg;
  cfg.lr = 5e-3;
  AdaptState state(student, {.lr = cfg.lr, .weight_decay = cfg.weight_decay});
  std::mt19937_64 rng(2);
  Gen g(11);
  std::vector<data::NoisyUtterance> batch;
  for (int k = 0; k < 4; ++k) batch.push_back(Utt(g, 1200 + 100 * k, "u" + std::to_string(k)));
  std::vector<double> losses;
  std::string teacher_sum = teacher->params().Checksum();
  for (std::size_t step = 1; step <= 50; ++step) {
    const auto before = student.Enhance(batch[0].noisy);
    const auto r = RemixItStep(&student, teacher.get(), &state, batch, rng, cfg);
    EXPECT_EQ(r.outputs[0].samples, before.samples);
    EXPECT_TRUE(r.permuted);
    for (std::size_t k = 0; k < 4; ++k) EXPECT_NE(r.permutation[k], k);
    EXPECT_EQ(r.teacher_updated, step % 8 == 0) << step;
    const std::string now = teacher->params().Checksum();
    EXPECT_EQ(now != teacher_sum, step % 8 == 0) << step;
    teacher_sum = now;
    losses.push_back(r.loss);
  }
  const double first = std::accumulate(losses.begin(), losses.begin() + 10, 0.0);
  const double last = std::accumulate(losses.end() - 10, losses.end(), 0.0);
  EXPECT_LT(last, first);
}

TEST(RemixIt, SingleUtteranceBatchIsFlagged) {
  model::AmModel student(SmallAm());
  auto teacher = student.Clone();
  AdaptState state(student, {});
  std::mt19937_64 rng(3);
  Gen g(12);
  const auto r = RemixItStep(&student, teacher.get(), &state, {Utt(g, 1000)}, rng, {});
  EXPECT_FALSE(r.permuted);
  EXPECT_EQ(r.outputs.size(), 1u);
}

// ---------------------------------------------------------------------------
// Full runs over a stream

class RunFixture : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dir_ = new ScratchDir("engine-test");
    data::SynthOptions o;
    o.n_utts = 8;
    o.seed = 5;
    o.min_seconds = 0.5;
    o.max_seconds = 0.8;
    o.noise_seconds = 2.0;
    o.out_dir = *dir_ / "corpus";
    const auto c = data::GenerateCorpus(o);
    data::BuildManifestOptions b;
    b.clean_dir = c.clean_dir;
    b.noise_dir = c.noise_dir;
    manifest_ = new data::Manifest(data::BuildManifest(b));
  }
  static void TearDownTestSuite() {
    delete manifest_;
    delete dir_;
  }

  struct Outcome {
    RunResult result;
    std::vector<std::vector<double>> outputs;
    std::string params;
  };

  static Outcome Run(Method method, std::size_t batch,
                     const std::filesystem::path &log = {},
                     std::function<void(std::size_t)> on_batch = {},
                     const ResumeToken *resume = nullptr,
                     model::AmModel *model_in = nullptr,
                     const std::filesystem::path &resume_dir = {}) {
    model::AmModel local(SmallAm());
    model::AmModel *model = model_in ? model_in : &local;
    data::UtteranceStream stream(*manifest_, data::MakeStreamOrder(*manifest_, 9), batch);
    RunConfig cfg;
    cfg.method = method;
    cfg.remixit.batch_size = batch;
    cfg.remixit.teacher_update_every = 2;
    cfg.log_path = log;
    cfg.resume_dir = resume_dir;
    const diet::DietMap d = IdentityDiet();
    Outcome out;
    std::size_t n = 0;
    out.result = RunTta(
        model, &stream, cfg, &d, &Encoder(),
        [&](const std::vector<data::UtterancePair> &, const std::vector<signal::Waveform> &o) {
          if (on_batch) on_batch(n);
          ++n;
          for (const auto &w : o) out.outputs.push_back(w.samples);
        },
        resume);
    out.params = model->params().Checksum();
    return out;
  }

  static ScratchDir *dir_;
  static data::Manifest *manifest_;
};
ScratchDir *RunFixture::dir_ = nullptr;
data::Manifest *RunFixture::manifest_ = nullptr;

TEST_F(RunFixture, SourceOnlyIsPlainInference) {
  const Outcome o = Run(Method::kSourceOnly, 1);
  const model::AmModel source(SmallAm());
  EXPECT_EQ(o.params, source.params().Checksum());
  ASSERT_EQ(o.outputs.size(), 8u);
  EXPECT_EQ(o.result.log.size(), 8u);
  const auto order = data::MakeStreamOrder(*manifest_, 9);
  data::PairLoader loader;
  for (std::size_t i = 0; i < 8; ++i) {
    const auto pair = loader.Load(*manifest_->Find(order.permutation[i]));
    EXPECT_EQ(o.outputs[i], source.Enhance(pair.noisy).samples);
    EXPECT_EQ(o.result.log[i].utterance_ids, std::vector<std::string>{order.permutation[i]});
  }
}

TEST_F(RunFixture, LogHasOneLinePerBatch) {
  for (auto [method, batch] : std::vector<std::pair<Method, std::size_t>>{
           {Method::kLaden, 1}, {Method::kRemixIt, 3}}) {
    const auto log = *dir_ / (std::string(MethodName(method)) + ".jsonl");
    const Outcome o = Run(method, batch, log);
    const std::size_t batches = (8 + batch - 1) / batch;
    EXPECT_EQ(o.result.log.size(), batches);
    EXPECT_EQ(o.result.steps, batches);
    EXPECT_EQ(o.outputs.size(), 8u);
    std::size_t lines = 0;
    for (char c : ReadTextFile(log)) lines += c == '\n';
    EXPECT_EQ(lines, batches);
  }
}

TEST_F(RunFixture, RunsAreDeterministic) {
  for (auto [method, batch] : std::vector<std::pair<Method, std::size_t>>{
           {Method::kLaden, 1}, {Method::kRemixIt, 4}}) {
    const Outcome a = Run(method, batch), b = Run(method, batch);
    EXPECT_EQ(a.outputs, b.outputs);
    EXPECT_EQ(a.params, b.params);
    ASSERT_EQ(a.result.log.size(), b.result.log.size());
    for (std::size_t i = 0; i < a.result.log.size(); ++i) {
      auto ja = a.result.log[i].ToJson(), jb = b.result.log[i].ToJson();
      ja.erase("wall_ms");
      jb.erase("wall_ms");
      EXPECT_EQ(ja, jb);
    }
  }
}

TEST_F(RunFixture, InterruptedRunResumesFromTheFailedBatch) {
  for (auto [method, batch] : std::vector<std::pair<Method, std::size_t>>{
           {Method::kSourceOnly, 1}, {Method::kLaden, 1}, {Method::kRemixIt, 2}}) {
    const std::string name = MethodName(method);
    const auto resume_dir = *dir_ / ("resume-" + name);
    const auto log = *dir_ / ("resume-" + name + ".jsonl");
    model::AmModel model(SmallAm());
    std::string committed;
    // Fails while delivering the third batch, after its adaptation step.
    EXPECT_THROW(Run(method, batch, log,
                     [&](std::size_t n) {
                       if (n == 1) committed = model.params().Checksum();
                       if (n == 2) throw Error(ErrorCode::kIo, "disk full");
                     },
                     nullptr, &model, resume_dir),
                 Error);
    const ResumeToken token = ResumeToken::Load(resume_dir / "resume.json");
    EXPECT_EQ(token.position, 2 * batch);
    EXPECT_EQ(token.step, 2u);
    // The saved state is the one that preceded the failed batch.
    EXPECT_EQ(model::LoadCheckpoint(token.checkpoint)->params().Checksum(), committed);
    EXPECT_EQ(model.params().Checksum(), committed);
    const Outcome full = Run(method, batch);

    model::AmModel resumed(SmallAm());
    const Outcome rest = Run(method, batch, log, {}, &token, &resumed);
    EXPECT_EQ(rest.result.log.front().step, 3u);
    EXPECT_EQ(rest.result.steps, (8 + batch - 1) / batch);
    EXPECT_EQ(rest.outputs.size(), 8 - 2 * batch);
    std::size_t lines = 0;
    for (char c : ReadTextFile(log)) lines += c == '\n';
    EXPECT_EQ(lines, (8 + batch - 1) / batch) << name;
    // Weights, optimizer moments, teacher and sampler all resume, so the
    // rest of the run reproduces the uninterrupted one exactly.
    for (std::size_t i = 0; i < rest.outputs.size(); ++i)
      EXPECT_EQ(rest.outputs[i], full.outputs[2 * batch + i]) << name << " " << i;
    EXPECT_EQ(rest.params, full.params) << name;
    EXPECT_EQ(token.optimizer_state.empty(), method == Method::kSourceOnly);
  }
}

TEST_F(RunFixture, LadenNeedsMatchingDiet) {
  model::AmModel m(SmallAm());
  data::UtteranceStream stream(*manifest_, data::MakeStreamOrder(*manifest_, 9), 1);
  RunConfig cfg;
  diet::DietMap d = IdentityDiet();
  d.encoder_id = "someone-else";
  try {
    RunTta(&m, &stream, cfg, &d, &Encoder(), {});
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::kEncoderConflict);
  }
  EXPECT_THROW(RunTta(&m, &stream, cfg, nullptr, &Encoder(), {}), Error);
}

}  // namespace
}  // namespace tta::engine
