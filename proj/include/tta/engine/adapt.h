// include/tta/engine/adapt.h

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

#ifndef TTA_ENGINE_ADAPT_H_
#define TTA_ENGINE_ADAPT_H_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include "tta/data/stream.h"
#include "tta/diet/diet.h"
#include "tta/embed/encoder.h"
#include "tta/engine/losses.h"
#include "tta/model/optimizer.h"
#include "tta/model/se-model.h"

namespace tta::engine {

/// theta <- beta * theta + (1 - beta) * theta_s on the masked parameters.
void EmaMerge(model::ParamSet *theta, const std::vector<Tensor> &theta_s,
              const std::vector<bool> &mask, double beta);

/// Online adaptation state.  The source snapshot is taken at construction
/// and never modified; the live parameters are those of the model.
class AdaptState {
 public:
  AdaptState(const model::SeModel &model, const model::AdamWOptions &opts);

  const std::vector<Tensor> &theta_s() const { return theta_s_; }
  const std::vector<bool> &mask() const { return mask_; }
  const std::vector<std::string> &adaptable_names() const { return names_; }
  model::AdamW &optimizer() { return optimizer_; }

  std::size_t step = 0;     // batches seen
  std::size_t updates = 0;  // optimizer steps taken
  std::size_t skipped = 0;  // gated or non-finite steps

 private:
  std::vector<bool> mask_;
  std::vector<std::string> names_;
  std::vector<Tensor> theta_s_;
  model::AdamW optimizer_;
};

/// Noisy input with its per-utterance targets, computed once when the
/// utterance arrives: the transformed embedding A g(y) and the Hilbert
/// envelope of the spectral-subtraction estimate.
struct LadenInput {
  data::NoisyUtterance utterance;
  std::vector<double> pseudo_label;
  std::vector<double> reference_envelope;
};

LadenInput PrepareLadenInput(const data::NoisyUtterance &u,
                             const diet::DietMap &diet,
                             const embed::Encoder &encoder,
                             const LadenConfig &cfg);

struct StepResult {
  std::vector<signal::Waveform> outputs;  // emitted before any update
  double l_ld = 0.0;  // batch means
  double l_r = 0.0;
  double loss = 0.0;
  bool gated = false;       // every utterance in the batch gated
  bool non_finite = false;  // update skipped for a non-finite loss
  bool updated = false;
};

/// One LaDen step.  The forward pass that yields the emitted outputs also
/// feeds the loss.  Utterances whose latent loss exceeds gamma contribute
/// nothing; if none remain the step is skipped (no optimizer step, no
/// weight averaging).  Otherwise one optimizer step on the adaptable
/// parameters is followed by EmaMerge toward the source.
StepResult LadenStep(model::SeModel *model, AdaptState *state,
                     const std::vector<LadenInput> &batch,
                     const embed::Encoder &encoder, const LadenConfig &cfg);

struct RemixItConfig {
  std::size_t batch_size = 8;
  std::size_t teacher_update_every = 8;  // batches
  double teacher_momentum = 0.99;
  double lr = 5e-4;
  double weight_decay = 0.01;
  std::uint64_t seed = 0;

  void Validate() const;
};

/// Uniform random derangement of 0..n-1 (identity for n < 2).
std::vector<std::size_t> RandomDerangement(std::size_t n, std::mt19937_64 &rng);

/// noise cyclically repeated or cropped to `length` samples.
std::vector<double> FitNoiseLength(const std::vector<double> &noise,
                                   std::size_t length);

struct RemixItStepResult {
  std::vector<signal::Waveform> outputs;  // student, before the update
  std::vector<std::size_t> permutation;
  double loss = 0.0;  // student MSE on the bootstrapped mixtures
  bool permuted = false;
  bool teacher_updated = false;
  bool non_finite = false;
};

/// Bootstrapped mixtures s_k + n_sigma(k) from teacher estimates s_k and
/// noise estimates n_k = y_k - s_k.
std::vector<signal::Waveform> BootstrapMixtures(
    const std::vector<signal::Waveform> &speech,
    const std::vector<signal::Waveform> &noise,
    const std::vector<std::size_t> &sigma);

/// One RemixIT step: the student takes one MSE step toward the teacher's
/// speech estimates from remixed inputs; every teacher_update_every
/// batches the teacher moves toward the student by EMA.  Both networks
/// touch only the adaptable parameters.
RemixItStepResult RemixItStep(model::SeModel *student, model::SeModel *teacher,
                              AdaptState *state,
                              const std::vector<data::NoisyUtterance> &batch,
                              std::mt19937_64 &rng, const RemixItConfig &cfg);

}  // namespace tta::engine

#endif  // TTA_ENGINE_ADAPT_H_
