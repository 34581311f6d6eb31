// include/tta/signal/wav-io.h

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

#ifndef TTA_SIGNAL_WAV_IO_H_
#define TTA_SIGNAL_WAV_IO_H_

#include <filesystem>

#include "tta/signal/waveform.h"

namespace tta::signal {

enum class WavEncoding { kPcm16, kFloat32 };

/// Reads a mono RIFF/WAVE file (16-bit PCM or 32-bit IEEE float).  When
/// target_rate > 0 the signal is resampled to it.
Waveform ReadWav(const std::filesystem::path &path,
                 int target_rate = kDefaultSampleRate);

void WriteWav(const std::filesystem::path &path, const Waveform &w,
              WavEncoding encoding = WavEncoding::kFloat32);

}  // namespace tta::signal

#endif  // TTA_SIGNAL_WAV_IO_H_
