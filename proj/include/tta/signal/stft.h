// include/tta/signal/stft.h

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

#ifndef TTA_SIGNAL_STFT_H_
#define TTA_SIGNAL_STFT_H_

#include <cstddef>
#include <vector>

#include "tta/base/tensor.h"
#include "tta/signal/fft.h"
#include "tta/signal/waveform.h"

namespace tta::signal {

enum class WindowType { kHann, kRectangular };

/// Periodic window of length n (the Hann variant satisfies COLA at hop n/2).
std::vector<double> MakeWindow(WindowType type, std::size_t n);

/// Equal-length sample windows; the tail frame is zero-padded.
struct FrameSet {
  std::vector<std::vector<double>> frames;
  std::size_t frame_len = 0;
  std::size_t hop = 0;
};

/// ceil(max(len - frame_len, 0) / hop) + 1.
std::size_t NumFrames(std::size_t len, std::size_t frame_len, std::size_t hop);

FrameSet FrameSignal(const Waveform &w, std::size_t frame_len, std::size_t hop);

/// 32 ms / 16 ms Hann analysis at 16 kHz.
struct StftConfig {
  std::size_t frame_len = 512;
  std::size_t hop = 256;
  WindowType window = WindowType::kHann;
};

struct Spectrogram {
  Tensor magnitudes;  // T x F, F = frame_len / 2 + 1
  Tensor phases;      // T x F, in (-pi, pi]
  std::size_t frame_len = 0;
  std::size_t hop = 0;
  int sample_rate = kDefaultSampleRate;
  WindowType window = WindowType::kHann;

  std::size_t num_frames() const { return magnitudes.rows(); }
  std::size_t num_bins() const { return magnitudes.cols(); }
  Complex Bin(std::size_t t, std::size_t f) const;
};

Spectrogram Stft(const Waveform &w, std::size_t frame_len, std::size_t hop,
                 WindowType window = WindowType::kHann);

/// Weighted overlap-add with the analysis window as synthesis window,
/// normalized by the summed squared window.  Output length is
/// (T - 1) * hop + frame_len; samples whose squared-window sum vanishes are 0.
Waveform Istft(const Spectrogram &s);

/// sum_t window[n - t * hop]^2 over a T-frame grid.
std::vector<double> WindowSumSquare(const std::vector<double> &window,
                                    std::size_t frames, std::size_t hop);

/// Zeros prepended and appended by the centered transform.
std::size_t CenterPad(const StftConfig &cfg);

/// STFT of the signal padded by CenterPad() zeros on both sides, so every
/// original sample lies under a window with non-zero weight.
Spectrogram CenteredStft(const Waveform &w, const StftConfig &cfg);

/// Inverse of CenteredStft, cropped back to `length` samples.
Waveform CenteredIstft(const Spectrogram &s, std::size_t length);

}  // namespace tta::signal

#endif  // TTA_SIGNAL_STFT_H_
