// include/tta/model/train.h

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

#ifndef TTA_MODEL_TRAIN_H_
#define TTA_MODEL_TRAIN_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "tta/data/stream.h"
#include "tta/model/optimizer.h"
#include "tta/model/se-model.h"

namespace tta::model {

struct TrainOptions {
  std::size_t epochs = 10;
  std::size_t batch_size = 4;
  AdamWOptions optimizer;  // lr 1e-3, weight decay 0.01
  std::uint64_t seed = 0;
  /// When non-zero, each step trains on a random window of this many
  /// samples (shorter utterances are used whole).
  std::size_t segment_samples = 0;
  /// Called after every epoch with the epoch index and mean training loss.
  std::function<void(std::size_t, double)> on_epoch;
};

struct TrainReport {
  std::vector<double> epoch_losses;
  double initial_val_mse = 0.0;  // 0 without validation utterances
  double final_val_mse = 0.0;
  std::size_t validation_utts = 0;
  std::size_t steps = 0;
};

/// Time-domain mean squared error of the model output against the clean
/// signal, averaged over utterances.
double MeanMse(const SeModel &model,
               const std::vector<data::UtterancePair> &pairs);

/// Supervised training of every parameter with MSE.  Deterministic for a
/// fixed seed.  A non-finite loss aborts with a divergence error naming the
/// epoch, step and utterance.
TrainReport TrainSource(SeModel *model,
                        const std::vector<data::UtterancePair> &train,
                        const std::vector<data::UtterancePair> &validation,
                        const TrainOptions &opts);

}  // namespace tta::model

#endif  // TTA_MODEL_TRAIN_H_
