// include/tta/signal/spectral-subtraction.h

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

#ifndef TTA_SIGNAL_SPECTRAL_SUBTRACTION_H_
#define TTA_SIGNAL_SPECTRAL_SUBTRACTION_H_

#include <cstddef>

#include "tta/signal/waveform.h"

namespace tta::signal {

struct SpectralSubtractionOptions {
  double noise_frame_fraction = 0.1;  // quietest frames used for the estimate
  std::size_t min_noise_frames = 5;
  double over_subtraction = 1.0;
  double floor = 0.02;  // relative to the noisy magnitude
};

/// Magnitude-domain spectral subtraction with a per-utterance stationary
/// noise estimate (mean magnitude of the lowest-energy frames) and the noisy
/// phase.  Output has the input's length and never more energy.
Waveform SpectralSubtraction(const Waveform &y, std::size_t frame_len = 512,
                             std::size_t hop = 256,
                             const SpectralSubtractionOptions &opts = {});

}  // namespace tta::signal

#endif  // TTA_SIGNAL_SPECTRAL_SUBTRACTION_H_
