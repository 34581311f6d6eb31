// src/engine/adapt.cc

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

#include "tta/engine/adapt.h"

#include <cmath>
#include <spdlog/spdlog.h>

#include "tta/autodiff/ops.h"
#include "tta/base/error.h"

namespace tta::engine {
namespace {

bool AllFinite(const std::vector<Tensor> &grads) {
  for (const auto &g : grads)
    for (double v : g.storage())
      if (!std::isfinite(v)) return false;
  return true;
}

void AddInto(std::vector<Tensor> *acc, std::vector<Tensor> g) {
  if (acc->empty()) {
    *acc = std::move(g);
    return;
  }
  for (std::size_t k = 0; k < acc->size(); ++k)
    for (std::size_t n = 0; n < (*acc)[k].size(); ++n) (*acc)[k][n] += g[k][n];
}

}  // namespace

void EmaMerge(model::ParamSet *theta, const std::vector<Tensor> &theta_s,
              const std::vector<bool> &mask, double beta) {
  TTA_REQUIRE(theta_s.size() == theta->size() && mask.size() == theta->size(),
              ErrorCode::kInvalidArgument, "weight averaging size mismatch");
  TTA_REQUIRE(beta >= 0.0 && beta <= 1.0, ErrorCode::kInvalidArgument,
              "beta must lie in [0, 1]");
  for (std::size_t i = 0; i < theta->size(); ++i) {
    if (!mask[i]) continue;
    Tensor &t = (*theta)[i].value;
    const Tensor &s = theta_s[i];
    TTA_REQUIRE(t.SameShape(s), ErrorCode::kInvalidArgument,
                "shape mismatch for " + (*theta)[i].name);
    for (std::size_t j = 0; j < t.size(); ++j)
      t[j] = beta * t[j] + (1.0 - beta) * s[j];
  }
}

AdaptState::AdaptState(const model::SeModel &model,
                       const model::AdamWOptions &opts)
    : mask_(model.AdaptableMask()),
      theta_s_(model.params().Values()),
      optimizer_(model.params(), mask_, opts) {
  for (std::size_t i = 0; i < mask_.size(); ++i)
    if (mask_[i]) names_.push_back(model.params()[i].name);
}

LadenInput PrepareLadenInput(const data::NoisyUtterance &u,
                             const diet::DietMap &diet,
                             const embed::Encoder &encoder,
                             const LadenConfig &cfg) {
  LadenInput in;
  in.utterance = u;
  in.pseudo_label =
      diet::Apply(diet, encoder.Encode(u.noisy, u.id)).vector;
  in.reference_envelope = ReferenceEnvelope(u.noisy, cfg);
  return in;
}

StepResult LadenStep(model::SeModel *model, AdaptState *state,
                     const std::vector<LadenInput> &batch,
                     const embed::Encoder &encoder, const LadenConfig &cfg) {
  TTA_REQUIRE(!batch.empty(), ErrorCode::kInvalidArgument, "empty batch");
  StepResult r;
  std::vector<Tensor> grads;
  std::size_t active = 0;
  for (const auto &in : batch) {
    ad::Tape tape;
    model::BoundParams bp(tape, model->params(), state->mask());
    ad::Var x_hat = model->Forward(bp, in.utterance.noisy);
    r.outputs.push_back(
        {x_hat.value().storage(), in.utterance.noisy.sample_rate});
    LadenLoss loss = ComputeLadenLoss(x_hat, in.pseudo_label,
                                      in.reference_envelope, encoder, cfg);
    r.l_ld += loss.l_ld;
    r.l_r += loss.l_r;
    if (!std::isfinite(loss.l_ld) || !std::isfinite(loss.l_r)) {
      r.non_finite = true;
      continue;
    }
    if (loss.gated) continue;
    r.loss += loss.total.value()[0];
    tape.Backward(loss.total);
    AddInto(&grads, bp.Grads());
    ++active;
  }
  const double inv = 1.0 / static_cast<double>(batch.size());
  r.l_ld *= inv;
  r.l_r *= inv;
  r.loss *= inv;
  ++state->step;
  r.gated = active == 0 && !r.non_finite;
  if (active > 0) {
    for (auto &g : grads)
      for (double &v : g.storage()) v *= inv;
    if (!AllFinite(grads)) r.non_finite = true;
  }
  if (r.non_finite) {
    spdlog::warn("step {}: non-finite loss or gradient, update skipped",
                 state->step);
    ++state->skipped;
    return r;
  }
  if (active == 0) {
    ++state->skipped;
    return r;
  }
  state->optimizer().Step(&model->params(), grads);
  EmaMerge(&model->params(), state->theta_s(), state->mask(), cfg.beta);
  ++state->updates;
  r.updated = true;
  return r;
}

void RemixItConfig::Validate() const {
  TTA_REQUIRE(batch_size >= 1 && teacher_update_every >= 1,
              ErrorCode::kInvalidArgument, "bad RemixIT schedule");
  TTA_REQUIRE(teacher_momentum >= 0.0 && teacher_momentum <= 1.0,
              ErrorCode::kInvalidArgument, "momentum must lie in [0, 1]");
  TTA_REQUIRE(lr > 0.0 && weight_decay >= 0.0, ErrorCode::kInvalidArgument,
              "bad optimizer settings");
}

std::vector<std::size_t> RandomDerangement(std::size_t n,
                                           std::mt19937_64 &rng) {
  std::vector<std::size_t> p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = i;
  if (n < 2) return p;
  // Rejection sampling over uniform shuffles; about e tries on average.
  for (;;) {
    for (std::size_t i = n - 1; i > 0; --i) {
      std::uniform_int_distribution<std::size_t> pick(0, i);
      std::swap(p[i], p[pick(rng)]);
    }
    bool fixed = false;
    for (std::size_t i = 0; i < n && !fixed; ++i) fixed = p[i] == i;
    if (!fixed) return p;
  }
}

std::vector<double> FitNoiseLength(const std::vector<double> &noise,
                                   std::size_t length) {
  TTA_REQUIRE(!noise.empty(), ErrorCode::kInvalidArgument, "empty noise");
  std::vector<double> out(length);
  for (std::size_t i = 0; i < length; ++i) out[i] = noise[i % noise.size()];
  return out;
}

std::vector<signal::Waveform> BootstrapMixtures(
    const std::vector<signal::Waveform> &speech,
    const std::vector<signal::Waveform> &noise,
    const std::vector<std::size_t> &sigma) {
  TTA_REQUIRE(speech.size() == noise.size() && sigma.size() == speech.size(),
              ErrorCode::kInvalidArgument, "bootstrap size mismatch");
  std::vector<signal::Waveform> out;
  for (std::size_t k = 0; k < speech.size(); ++k) {
    const auto &s = speech[k].samples;
    std::vector<double> n = FitNoiseLength(noise[sigma[k]].samples, s.size());
    for (std::size_t i = 0; i < s.size(); ++i) n[i] += s[i];
    out.push_back({std::move(n), speech[k].sample_rate});
  }
  return out;
}

RemixItStepResult RemixItStep(model::SeModel *student, model::SeModel *teacher,
                              AdaptState *state,
                              const std::vector<data::NoisyUtterance> &batch,
                              std::mt19937_64 &rng, const RemixItConfig &cfg) {
  TTA_REQUIRE(!batch.empty(), ErrorCode::kInvalidArgument, "empty batch");
  RemixItStepResult r;
  std::vector<signal::Waveform> speech, noise;
  for (const auto &u : batch) {
    r.outputs.push_back(student->Enhance(u.noisy));
    signal::Waveform s = teacher->Enhance(u.noisy);
    signal::Waveform n = u.noisy;
    for (std::size_t i = 0; i < n.size(); ++i) n.samples[i] -= s.samples[i];
    speech.push_back(std::move(s));
    noise.push_back(std::move(n));
  }
  r.permutation = RandomDerangement(batch.size(), rng);
  r.permuted = batch.size() >= 2;
  if (!r.permuted)
    spdlog::debug("batch of one: no remixing, plain self-distillation");
  std::vector<signal::Waveform> mixtures =
      BootstrapMixtures(speech, noise, r.permutation);

  std::vector<Tensor> grads;
  for (std::size_t k = 0; k < batch.size(); ++k) {
    ad::Tape tape;
    model::BoundParams bp(tape, student->params(), state->mask());
    ad::Var est = student->Forward(bp, mixtures[k]);
    ad::Var loss = ad::MeanSquaredError(
        est, tape.Constant(Tensor::Vector(speech[k].samples)));
    r.loss += loss.value()[0];
    tape.Backward(loss);
    AddInto(&grads, bp.Grads());
  }
  const double inv = 1.0 / static_cast<double>(batch.size());
  r.loss *= inv;
  for (auto &g : grads)
    for (double &v : g.storage()) v *= inv;
  ++state->step;
  if (!std::isfinite(r.loss) || !AllFinite(grads)) {
    spdlog::warn("step {}: non-finite RemixIT loss, update skipped",
                 state->step);
    r.non_finite = true;
    ++state->skipped;
  } else {
    state->optimizer().Step(&student->params(), grads);
    ++state->updates;
  }
  if (state->step % cfg.teacher_update_every == 0) {
    EmaMerge(&teacher->params(), student->params().Values(), state->mask(),
             cfg.teacher_momentum);
    r.teacher_updated = true;
  }
  return r;
}

}  // namespace tta::engine
