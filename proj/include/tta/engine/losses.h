// include/tta/engine/losses.h

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

#ifndef TTA_ENGINE_LOSSES_H_
#define TTA_ENGINE_LOSSES_H_

#include <cstddef>
#include <vector>

#include "tta/autodiff/tape.h"
#include "tta/embed/encoder.h"
#include "tta/signal/spectral-subtraction.h"
#include "tta/signal/waveform.h"

namespace tta::engine {

struct LadenConfig {
  double lambda = 0.1;  // envelope term weight
  double gamma = 0.05;  // latent loss threshold above which a step is skipped
  double tau = 1.0;     // softmax temperature on standardized frame powers
  double beta = 0.99;   // weight averaging toward the source parameters
  double lr = 5e-4;
  double weight_decay = 0.01;
  std::size_t frame_len = 512;
  std::size_t hop = 256;
  signal::SpectralSubtractionOptions subtraction;

  void Validate() const;
};

struct FrameWeights {
  std::vector<double> rho;  // sums to one
};

/// Softmax over per-frame powers of x (frame_len / hop grid, zero-padded
/// tail), standardized to zero mean and unit variance across frames, at
/// temperature tau.  When every frame has the same power the weights are
/// uniform.
FrameWeights ComputeFrameWeights(const std::vector<double> &x,
                                 std::size_t frame_len, std::size_t hop,
                                 double tau);

/// 1 - cos(encode(x_hat), pseudo_label).  Throws degenerate-embedding when
/// either vector has zero norm.
ad::Var LatentLoss(const ad::Var &x_hat, const std::vector<double> &pseudo_label,
                   const embed::Encoder &encoder);

/// Hilbert envelope of the spectral-subtraction estimate of y; the target
/// of the envelope term.  Computed once per utterance.
std::vector<double> ReferenceEnvelope(const signal::Waveform &y,
                                      const LadenConfig &cfg);

struct EnvelopeResult {
  ad::Var similarity;  // L_R: weighted framewise envelope cosine, in [-1, 1]
  FrameWeights weights;
  bool all_silent = false;  // x_hat has a zero envelope in every frame
};

/// sum_i rho_i cos(env_i(x_hat), ref_i).  rho is computed from x_hat but
/// enters as a constant, so no gradient flows through the weights.
EnvelopeResult EnvelopeSimilarity(const ad::Var &x_hat,
                                  const std::vector<double> &reference_envelope,
                                  const LadenConfig &cfg);

/// Same with caller-supplied weights.
ad::Var EnvelopeSimilarity(const ad::Var &x_hat,
                           const std::vector<double> &reference_envelope,
                           const FrameWeights &weights, const LadenConfig &cfg);

struct LadenLoss {
  ad::Var total;
  bool gated = false;  // latent loss above gamma: total is 0, no update
  double l_ld = 0.0;
  double l_r = 0.0;    // envelope similarity (higher is better)
  bool all_silent = false;
};

/// total = L_LD + lambda * (1 - L_R) when L_LD <= gamma, else 0.  The
/// envelope term enters as a distance so that better alignment lowers the
/// loss.
LadenLoss CombineLosses(const ad::Var &l_ld, const ad::Var &l_r,
                        const LadenConfig &cfg);

LadenLoss ComputeLadenLoss(const ad::Var &x_hat,
                           const std::vector<double> &pseudo_label,
                           const std::vector<double> &reference_envelope,
                           const embed::Encoder &encoder,
                           const LadenConfig &cfg);

}  // namespace tta::engine

#endif  // TTA_ENGINE_LOSSES_H_
