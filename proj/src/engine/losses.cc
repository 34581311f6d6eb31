// src/engine/losses.cc

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

#include "tta/engine/losses.h"

#include <algorithm>
#include <cmath>

#include "tta/autodiff/ops.h"
#include "tta/base/error.h"
#include "tta/signal/envelope.h"
#include "tta/signal/signal-ops.h"

namespace tta::engine {

void LadenConfig::Validate() const {
  TTA_REQUIRE(lambda >= 0.0, ErrorCode::kInvalidArgument,
              "lambda must be non-negative");
  TTA_REQUIRE(gamma > 0.0, ErrorCode::kInvalidArgument,
              "gamma must be positive");
  TTA_REQUIRE(tau > 0.0, ErrorCode::kInvalidArgument, "tau must be positive");
  TTA_REQUIRE(beta >= 0.0 && beta <= 1.0, ErrorCode::kInvalidArgument,
              "beta must lie in [0, 1]");
  TTA_REQUIRE(lr > 0.0 && weight_decay >= 0.0, ErrorCode::kInvalidArgument,
              "bad optimizer settings");
  TTA_REQUIRE(frame_len >= 1 && hop >= 1, ErrorCode::kInvalidArgument,
              "bad frame grid");
}

FrameWeights ComputeFrameWeights(const std::vector<double> &x,
                                 std::size_t frame_len, std::size_t hop,
                                 double tau) {
  TTA_REQUIRE(!x.empty(), ErrorCode::kInvalidArgument, "empty signal");
  TTA_REQUIRE(tau > 0.0, ErrorCode::kInvalidArgument, "tau must be positive");
  const std::size_t n = x.size();
  const std::size_t excess = n > frame_len ? n - frame_len : 0;
  const std::size_t frames = (excess + hop - 1) / hop + 1;
  std::vector<double> z(frames, 0.0);
  for (std::size_t t = 0; t < frames; ++t) {
    double e = 0.0;
    for (std::size_t i = 0; i < frame_len && t * hop + i < n; ++i)
      e += x[t * hop + i] * x[t * hop + i];
    z[t] = e / static_cast<double>(frame_len);
  }
  double mean = 0.0;
  for (double v : z) mean += v;
  mean /= static_cast<double>(frames);
  double var = 0.0;
  for (double v : z) var += (v - mean) * (v - mean);
  var /= static_cast<double>(frames);
  const double sd = std::sqrt(var);
  for (double &v : z) v = sd > 0.0 ? (v - mean) / sd / tau : 0.0;
  const double mx = *std::max_element(z.begin(), z.end());
  double sum = 0.0;
  for (double &v : z) {
    v = std::exp(v - mx);
    sum += v;
  }
  for (double &v : z) v /= sum;
  return FrameWeights{std::move(z)};
}

ad::Var LatentLoss(const ad::Var &x_hat, const std::vector<double> &pseudo_label,
                   const embed::Encoder &encoder) {
  TTA_REQUIRE(pseudo_label.size() == encoder.spec().dim,
              ErrorCode::kInvalidArgument,
              "pseudo-label dimension does not match the encoder");
  double pn = 0.0;
  for (double v : pseudo_label) pn += v * v;
  TTA_REQUIRE(pn > 0.0, ErrorCode::kDegenerateEmbedding,
              "pseudo-label has zero norm");
  ad::Var e = encoder.EncodeVar(x_hat);
  TTA_REQUIRE(e.value().SquaredNorm() > 0.0, ErrorCode::kDegenerateEmbedding,
              "embedding of the enhanced signal has zero norm");
  ad::Var c = ad::Cosine(e, x_hat.tape()->Constant(Tensor::Vector(pseudo_label)));
  return ad::AddScalar(ad::Scale(c, -1.0), 1.0);
}

std::vector<double> ReferenceEnvelope(const signal::Waveform &y,
                                      const LadenConfig &cfg) {
  signal::Waveform ss =
      signal::SpectralSubtraction(y, cfg.frame_len, cfg.hop, cfg.subtraction);
  return signal::HilbertEnvelope(ss).samples;
}

ad::Var EnvelopeSimilarity(const ad::Var &x_hat,
                           const std::vector<double> &reference_envelope,
                           const FrameWeights &weights, const LadenConfig &cfg) {
  TTA_REQUIRE(x_hat.value().size() == reference_envelope.size(),
              ErrorCode::kInvalidArgument,
              "enhanced signal and reference differ in length");
  ad::Tape &tape = *x_hat.tape();
  ad::Var env = ad::Frame(signal::HilbertEnvelope(x_hat), cfg.frame_len,
                          cfg.hop);
  ad::Var ref = ad::Frame(tape.Constant(Tensor::Vector(reference_envelope)),
                          cfg.frame_len, cfg.hop);
  TTA_REQUIRE(weights.rho.size() == env.value().rows(),
              ErrorCode::kInvalidArgument, "frame weight count mismatch");
  return ad::Dot(tape.Constant(Tensor::Vector(weights.rho)),
                 ad::RowCosine(env, ref));
}

EnvelopeResult EnvelopeSimilarity(const ad::Var &x_hat,
                                  const std::vector<double> &reference_envelope,
                                  const LadenConfig &cfg) {
  EnvelopeResult r;
  const std::vector<double> &x = x_hat.value().storage();
  r.weights = ComputeFrameWeights(x, cfg.frame_len, cfg.hop, cfg.tau);
  r.all_silent = std::all_of(x.begin(), x.end(),
                             [](double v) { return v == 0.0; });
  if (r.all_silent) {
    r.similarity = x_hat.tape()->Constant(Tensor::Scalar(0.0));
    return r;
  }
  r.similarity = EnvelopeSimilarity(x_hat, reference_envelope, r.weights, cfg);
  return r;
}

LadenLoss CombineLosses(const ad::Var &l_ld, const ad::Var &l_r,
                        const LadenConfig &cfg) {
  LadenLoss out;
  out.l_ld = l_ld.value()[0];
  out.l_r = l_r.value()[0];
  out.gated = !(out.l_ld <= cfg.gamma);
  if (out.gated) {
    out.total = l_ld.tape()->Constant(Tensor::Scalar(0.0));
    return out;
  }
  ad::Var distance = ad::AddScalar(ad::Scale(l_r, -1.0), 1.0);
  out.total = cfg.lambda == 0.0
                  ? l_ld
                  : ad::Add(l_ld, ad::Scale(distance, cfg.lambda));
  return out;
}

LadenLoss ComputeLadenLoss(const ad::Var &x_hat,
                           const std::vector<double> &pseudo_label,
                           const std::vector<double> &reference_envelope,
                           const embed::Encoder &encoder,
                           const LadenConfig &cfg) {
  ad::Var l_ld = LatentLoss(x_hat, pseudo_label, encoder);
  EnvelopeResult env = EnvelopeSimilarity(x_hat, reference_envelope, cfg);
  LadenLoss out = CombineLosses(l_ld, env.similarity, cfg);
  out.all_silent = env.all_silent;
  return out;
}

}  // namespace tta::engine
