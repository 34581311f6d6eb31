// include/tta/embed/toy-encoder.h

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

#ifndef TTA_EMBED_TOY_ENCODER_H_
#define TTA_EMBED_TOY_ENCODER_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "tta/base/tensor.h"
#include "tta/embed/encoder.h"

namespace tta::embed {

struct ToyEncoderConfig {
  std::size_t dim = 64;
  std::uint64_t seed = 0;
  // Non-overlapping strided convolutions: kernel == stride at every level,
  // so one output frame sees exactly prod(strides) samples.
  std::array<std::size_t, 3> strides = {10, 4, 8};
  std::array<std::size_t, 2> channels = {32, 48};
};

/// Small random-feature CNN encoder: utterance standardization, three
/// strided convolutions with tanh between them, per-frame L2 normalization.
/// Positive rescaling of the input leaves the embedding unchanged.
class ToyEncoder : public Encoder {
 public:
  static ToyEncoder Create(const ToyEncoderConfig &cfg);
  static ToyEncoder Load(const std::filesystem::path &path);
  void Save(const std::filesystem::path &path) const;

  const EncoderSpec &spec() const override { return spec_; }
  ad::Var FrameEmbeddings(const ad::Var &waveform) const override;
  std::string WeightsChecksum() const override;

  const ToyEncoderConfig &config() const { return cfg_; }

 private:
  ToyEncoder() = default;
  void Finalize();

  ToyEncoderConfig cfg_;
  EncoderSpec spec_;
  std::array<Tensor, 3> weights_;  // [fan_in x fan_out]
  std::array<Tensor, 3> biases_;
};

}  // namespace tta::embed

#endif  // TTA_EMBED_TOY_ENCODER_H_
