// include/tta/data/mix.h

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

#ifndef TTA_DATA_MIX_H_
#define TTA_DATA_MIX_H_

#include <cstddef>

#include "tta/signal/waveform.h"

namespace tta::data {

struct MixResult {
  signal::Waveform noisy;
  signal::Waveform scaled_noise;  // the exact noise component added
  double noise_scale = 0.0;
};

/// y = x + g * n[offset : offset + len(x)] (cyclic), with g chosen so that
/// 10 log10(P_x / P_{g n}) = snr_db over the whole utterance.  No clipping
/// or loudness normalization is applied.
MixResult MixDetailed(const signal::Waveform &clean,
                      const signal::Waveform &noise, std::size_t offset,
                      double snr_db);

signal::Waveform Mix(const signal::Waveform &clean,
                     const signal::Waveform &noise, std::size_t offset,
                     double snr_db);

/// Cyclic segment of `noise` of the given length starting at offset.
signal::Waveform NoiseSegment(const signal::Waveform &noise,
                              std::size_t offset, std::size_t length);

}  // namespace tta::data

#endif  // TTA_DATA_MIX_H_
