// include/tta/embed/encoder.h

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

#ifndef TTA_EMBED_ENCODER_H_
#define TTA_EMBED_ENCODER_H_

#include <cstddef>
#include <string>
#include <vector>

#include "tta/autodiff/tape.h"
#include "tta/signal/waveform.h"

namespace tta::embed {

struct EncoderSpec {
  std::string encoder_id;
  std::size_t dim = 0;
  std::size_t frame_hop = 0;  // samples per output frame
  int sample_rate = signal::kDefaultSampleRate;
  bool frozen = true;
};

/// Utterance-level embedding: mean over the encoder's frame embeddings.
struct Embedding {
  std::vector<double> vector;
  std::string encoder_id;
  std::string utterance_id;
};

/// Frozen speech encoder.  Implementations map a waveform to per-frame
/// embeddings as a differentiable function of the samples; the weights
/// themselves never receive gradients.
class Encoder {
 public:
  virtual ~Encoder() = default;

  virtual const EncoderSpec &spec() const = 0;

  /// [frames x dim] for a rank-1 waveform Var.  Throws too-short-input when
  /// the signal holds less than one frame.
  virtual ad::Var FrameEmbeddings(const ad::Var &waveform) const = 0;

  /// CRC of the weights; unchanged for the lifetime of the encoder.
  virtual std::string WeightsChecksum() const = 0;

  /// Mean-pooled embedding as a Var (for losses).
  ad::Var EncodeVar(const ad::Var &waveform) const;

  Embedding Encode(const signal::Waveform &w,
                   const std::string &utterance_id = "") const;
};

double CosineSimilarity(const std::vector<double> &a,
                        const std::vector<double> &b);

}  // namespace tta::embed

#endif  // TTA_EMBED_ENCODER_H_
