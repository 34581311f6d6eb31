// src/signal/spectral-subtraction.cc

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

#include "tta/signal/spectral-subtraction.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tta/base/error.h"
#include "tta/signal/stft.h"

namespace tta::signal {

Waveform SpectralSubtraction(const Waveform &y, std::size_t frame_len,
                             std::size_t hop,
                             const SpectralSubtractionOptions &opts) {
  CheckWaveform(y);
  TTA_REQUIRE(y.size() >= frame_len, ErrorCode::kInvalidArgument,
              "input shorter than one frame");
  const StftConfig cfg{frame_len, hop, WindowType::kHann};
  Spectrogram spec = CenteredStft(y, cfg);
  const std::size_t frames = spec.num_frames(), bins = spec.num_bins();

  std::vector<double> energy(frames, 0.0);
  for (std::size_t t = 0; t < frames; ++t)
    for (std::size_t f = 0; f < bins; ++f)
      energy[t] += spec.magnitudes.at(t, f) * spec.magnitudes.at(t, f);
  std::vector<std::size_t> order(frames);
  std::iota(order.begin(), order.end(), 0);
  // Stable so ties resolve identically on every run.
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return energy[a] < energy[b];
                   });
  std::size_t count = static_cast<std::size_t>(
      std::ceil(opts.noise_frame_fraction * static_cast<double>(frames)));
  count = std::min(frames, std::max(count, opts.min_noise_frames));

  std::vector<double> noise(bins, 0.0);
  for (std::size_t i = 0; i < count; ++i)
    for (std::size_t f = 0; f < bins; ++f)
      noise[f] += spec.magnitudes.at(order[i], f);
  for (double &v : noise) v /= static_cast<double>(count);

  for (std::size_t t = 0; t < frames; ++t)
    for (std::size_t f = 0; f < bins; ++f) {
      double &m = spec.magnitudes.at(t, f);
      m = std::max(m - opts.over_subtraction * noise[f], opts.floor * m);
    }
  Waveform out = CenteredIstft(spec, y.size());
  out.sample_rate = y.sample_rate;
  const double ein = y.Energy(), eout = out.Energy();
  if (eout > ein && eout > 0.0) {
    const double g = std::sqrt(ein / eout);
    for (double &v : out.samples) v *= g;
  }
  return out;
}

}  // namespace tta::signal
