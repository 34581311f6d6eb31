// include/tta/signal/waveform.h

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

#ifndef TTA_SIGNAL_WAVEFORM_H_
#define TTA_SIGNAL_WAVEFORM_H_

#include <cstddef>
#include <vector>

namespace tta::signal {

inline constexpr int kDefaultSampleRate = 16000;

/// Mono PCM signal, nominal amplitude range [-1, 1].
struct Waveform {
  std::vector<double> samples;
  int sample_rate = kDefaultSampleRate;

  std::size_t size() const { return samples.size(); }
  double Energy() const;
  double Power() const;  // mean square
};

/// Throws invalid-argument for an empty signal or non-positive rate and
/// invalid-signal for non-finite samples.
void CheckWaveform(const Waveform &w);

Waveform Scaled(const Waveform &w, double gain);

}  // namespace tta::signal

#endif  // TTA_SIGNAL_WAVEFORM_H_
