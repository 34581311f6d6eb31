// include/tta/model/am-model.h

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

#ifndef TTA_MODEL_AM_MODEL_H_
#define TTA_MODEL_AM_MODEL_H_

#include <cstdint>
#include <memory>
#include <random>
#include <vector>

#include "tta/model/se-model.h"
#include "tta/signal/stft.h"

namespace tta::model {

struct AmConfig {
  std::size_t n_blocks = 3;
  std::size_t hidden = 256;  // width of the expanded frequency axis
  std::size_t heads = 4;
  std::vector<std::size_t> conv_dilations = {1, 2, 4};
  std::size_t conv_channels = 8;
  std::size_t conv_kernel = 3;
  std::size_t fft_size = 512;
  std::size_t hop = 256;
  std::uint64_t seed = 0;

  std::size_t num_bins() const { return fft_size / 2 + 1; }
  void Validate() const;
};

nlohmann::json ToJson(const AmConfig &c);
AmConfig AmConfigFromJson(const nlohmann::json &j);

struct ParamCount {
  std::size_t total = 0;
  std::size_t adaptable = 0;
};

/// Parameter counts derived from the layer shapes of `c`.
ParamCount AmParamCount(const AmConfig &c);

/// Amplitude-mask network over STFT magnitudes.
///
/// Features are log1p magnitudes normalized to zero mean and unit variance
/// over the utterance.  An input layer maps the F bins to `hidden`, L
/// residual blocks follow, and an output MLP maps back to F bins with a
/// softplus, giving a non-negative mask.  The mask scales the noisy complex
/// spectrum (noisy phase kept) and the inverse STFT is cropped to the input
/// length.
///
/// Block: x -> LN -> self-attention over time (+res) -> MLP over the hidden
/// axis (+res) -> dilated 2-D convolutions on the T x hidden grid (+res)
/// -> LN -> MLP, added to the block input.
class AmModel : public SeModel {
 public:
  enum class MaskOverride { kNone, kOnes, kZeros };
  struct Hooks {
    MaskOverride mask = MaskOverride::kNone;
    bool disable_conv = false;
  };

  explicit AmModel(const AmConfig &cfg);

  std::string Kind() const override { return "am"; }
  nlohmann::json ConfigJson() const override { return ToJson(cfg_); }
  std::unique_ptr<SeModel> Clone() const override;
  ad::Var Forward(const BoundParams &p,
                  const signal::Waveform &noisy) const override;
  std::vector<bool> AdaptableMask() const override;

  const AmConfig &config() const { return cfg_; }
  signal::StftConfig stft_config() const;

  // Pieces of the forward pass, exposed for testing.
  Tensor Features(const signal::Spectrogram &s) const;
  ad::Var Mask(const BoundParams &p, const signal::Spectrogram &s) const;
  ad::Var Block(const BoundParams &p, std::size_t b, const ad::Var &x) const;

  // Test hooks.
  void set_hooks(const Hooks &h) { hooks_ = h; }
  const Hooks &hooks() const { return hooks_; }
  /// Zeroes every sub-layer weight and bias of block b (layer norms kept),
  /// so the block passes its input through unchanged.
  void ZeroSubLayers(std::size_t b);

 private:
  struct LinearIdx {
    std::size_t w, b;
  };
  struct BlockIdx {
    std::size_t ln1_g, ln1_b, ln2_g, ln2_b;
    LinearIdx q, k, v, o;
    LinearIdx mlp1_a, mlp1_b, mlp2_a, mlp2_b;
    std::vector<LinearIdx> conv;  // one per dilation, [C x 1 x K x K]
    LinearIdx conv_proj;          // [1 x C x 1 x 1]
  };

  LinearIdx AddLinear(const std::string &name, std::size_t in,
                      std::size_t out, std::mt19937_64 &rng);
  ad::Var ApplyLinear(const BoundParams &p, const LinearIdx &l,
                      const ad::Var &x) const;
  ad::Var Mlp(const BoundParams &p, const LinearIdx &a, const LinearIdx &b,
              const ad::Var &x) const;

  AmConfig cfg_;
  Hooks hooks_;
  LinearIdx input_;
  std::vector<BlockIdx> blocks_;
  LinearIdx out_a_, out_b_;
};

}  // namespace tta::model

#endif  // TTA_MODEL_AM_MODEL_H_
