// src/embed/encoder.cc

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

#include "tta/embed/encoder.h"

#include <cmath>

#include "tta/autodiff/ops.h"
#include "tta/base/error.h"

namespace tta::embed {

ad::Var Encoder::EncodeVar(const ad::Var &waveform) const {
  return ad::MeanRows(FrameEmbeddings(waveform));
}

Embedding Encoder::Encode(const signal::Waveform &w,
                          const std::string &utterance_id) const {
  signal::CheckWaveform(w);
  TTA_REQUIRE(w.sample_rate == spec().sample_rate, ErrorCode::kInvalidArgument,
              "encoder expects " + std::to_string(spec().sample_rate) + " Hz");
  ad::Tape tape(/*grad_enabled=*/false);
  ad::Var x = tape.Constant(Tensor::Vector(w.samples));
  ad::Var e = EncodeVar(x);
  return Embedding{e.value().storage(), spec().encoder_id, utterance_id};
}

double CosineSimilarity(const std::vector<double> &a,
                        const std::vector<double> &b) {
  TTA_REQUIRE(a.size() == b.size(), ErrorCode::kInvalidArgument,
              "cosine of vectors with different sizes");
  double ab = 0.0, aa = 0.0, bb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ab += a[i] * b[i];
    aa += a[i] * a[i];
    bb += b[i] * b[i];
  }
  TTA_REQUIRE(aa > 0.0 && bb > 0.0, ErrorCode::kDegenerateEmbedding,
              "cosine of a zero-norm vector");
  return std::clamp(ab / std::sqrt(aa * bb), -1.0, 1.0);
}

}  // namespace tta::embed
