// src/signal/stft.cc

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

#include "tta/signal/stft.h"

#include <cmath>
#include <numbers>

#include "tta/base/error.h"

namespace tta::signal {
namespace {

bool IsPowerOfTwo(std::size_t n) { return n > 0 && (n & (n - 1)) == 0; }

void CheckGrid(std::size_t frame_len, std::size_t hop) {
  TTA_REQUIRE(frame_len > 0 && hop > 0, ErrorCode::kInvalidArgument,
              "frame length and hop must be positive");
  TTA_REQUIRE(IsPowerOfTwo(frame_len), ErrorCode::kInvalidArgument,
              "frame length must be a power of two");
  TTA_REQUIRE(frame_len % hop == 0, ErrorCode::kInvalidArgument,
              "hop must divide the frame length");
}

constexpr double kTinyWindowSum = 1e-10;

}  // namespace

std::vector<double> MakeWindow(WindowType type, std::size_t n) {
  std::vector<double> w(n, 1.0);
  if (type == WindowType::kHann)
    for (std::size_t i = 0; i < n; ++i)
      w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi *
                                  static_cast<double>(i) /
                                  static_cast<double>(n));
  return w;
}

std::size_t NumFrames(std::size_t len, std::size_t frame_len,
                      std::size_t hop) {
  const std::size_t excess = len > frame_len ? len - frame_len : 0;
  return (excess + hop - 1) / hop + 1;
}

FrameSet FrameSignal(const Waveform &w, std::size_t frame_len,
                     std::size_t hop) {
  TTA_REQUIRE(frame_len >= 1 && hop >= 1, ErrorCode::kInvalidArgument,
              "frame length and hop must be positive");
  FrameSet fs;
  fs.frame_len = frame_len;
  fs.hop = hop;
  const std::size_t n = w.size();
  const std::size_t frames = NumFrames(n, frame_len, hop);
  fs.frames.assign(frames, std::vector<double>(frame_len, 0.0));
  for (std::size_t t = 0; t < frames; ++t)
    for (std::size_t i = 0; i < frame_len && t * hop + i < n; ++i)
      fs.frames[t][i] = w.samples[t * hop + i];
  return fs;
}

Complex Spectrogram::Bin(std::size_t t, std::size_t f) const {
  return std::polar(magnitudes.at(t, f), phases.at(t, f));
}

Spectrogram Stft(const Waveform &w, std::size_t frame_len, std::size_t hop,
                 WindowType window) {
  CheckGrid(frame_len, hop);
  CheckWaveform(w);
  const std::vector<double> win = MakeWindow(window, frame_len);
  const FrameSet fs = FrameSignal(w, frame_len, hop);
  const std::size_t frames = fs.frames.size(), bins = frame_len / 2 + 1;
  Spectrogram s;
  s.magnitudes = Tensor({frames, bins});
  s.phases = Tensor({frames, bins});
  s.frame_len = frame_len;
  s.hop = hop;
  s.sample_rate = w.sample_rate;
  s.window = window;
  std::vector<double> buf(frame_len);
  for (std::size_t t = 0; t < frames; ++t) {
    for (std::size_t i = 0; i < frame_len; ++i) buf[i] = fs.frames[t][i] * win[i];
    const std::vector<Complex> spec = Rfft(buf);
    for (std::size_t f = 0; f < bins; ++f) {
      s.magnitudes.at(t, f) = std::abs(spec[f]);
      s.phases.at(t, f) = std::arg(spec[f]);
    }
  }
  return s;
}

std::vector<double> WindowSumSquare(const std::vector<double> &window,
                                    std::size_t frames, std::size_t hop) {
  const std::size_t n = window.size();
  std::vector<double> acc((frames - 1) * hop + n, 0.0);
  for (std::size_t t = 0; t < frames; ++t)
    for (std::size_t i = 0; i < n; ++i) acc[t * hop + i] += window[i] * window[i];
  return acc;
}

Waveform Istft(const Spectrogram &s) {
  const std::size_t frames = s.magnitudes.rank() == 2 ? s.num_frames() : 0;
  TTA_REQUIRE(frames >= 1 && s.frame_len > 0 && s.hop > 0 &&
                  s.num_bins() == s.frame_len / 2 + 1 &&
                  s.phases.SameShape(s.magnitudes),
              ErrorCode::kInvalidArgument, "inconsistent spectrogram dimensions");
  CheckGrid(s.frame_len, s.hop);
  const std::vector<double> win = MakeWindow(s.window, s.frame_len);
  const std::vector<double> norm = WindowSumSquare(win, frames, s.hop);
  Waveform out;
  out.sample_rate = s.sample_rate;
  out.samples.assign(norm.size(), 0.0);
  std::vector<Complex> bins(s.num_bins());
  for (std::size_t t = 0; t < frames; ++t) {
    for (std::size_t f = 0; f < bins.size(); ++f) bins[f] = s.Bin(t, f);
    const std::vector<double> frame = Irfft(bins, s.frame_len);
    for (std::size_t i = 0; i < s.frame_len; ++i)
      out.samples[t * s.hop + i] += win[i] * frame[i];
  }
  for (std::size_t i = 0; i < norm.size(); ++i)
    out.samples[i] = norm[i] > kTinyWindowSum ? out.samples[i] / norm[i] : 0.0;
  return out;
}

std::size_t CenterPad(const StftConfig &cfg) { return cfg.frame_len - cfg.hop; }

Spectrogram CenteredStft(const Waveform &w, const StftConfig &cfg) {
  CheckWaveform(w);
  const std::size_t pad = CenterPad(cfg);
  Waveform padded;
  padded.sample_rate = w.sample_rate;
  padded.samples.assign(w.size() + 2 * pad, 0.0);
  std::copy(w.samples.begin(), w.samples.end(), padded.samples.begin() + pad);
  return Stft(padded, cfg.frame_len, cfg.hop, cfg.window);
}

Waveform CenteredIstft(const Spectrogram &s, std::size_t length) {
  StftConfig cfg{s.frame_len, s.hop, s.window};
  const std::size_t pad = CenterPad(cfg);
  Waveform full = Istft(s);
  TTA_REQUIRE(full.size() >= pad + length, ErrorCode::kInvalidArgument,
              "spectrogram too short for requested length");
  Waveform out;
  out.sample_rate = s.sample_rate;
  out.samples.assign(full.samples.begin() + pad,
                     full.samples.begin() + pad + length);
  return out;
}

}  // namespace tta::signal
