// src/signal/resample.cc

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

#include "tta/signal/resample.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "tta/base/error.h"

namespace tta::signal {

Waveform Resample(const Waveform &w, int target_rate) {
  CheckWaveform(w);
  TTA_REQUIRE(target_rate > 0, ErrorCode::kInvalidArgument,
              "target rate must be positive");
  if (target_rate == w.sample_rate) return w;
  constexpr double kZeroCrossings = 16.0;
  constexpr double kRolloff = 0.97;
  const double ratio =
      static_cast<double>(target_rate) / static_cast<double>(w.sample_rate);
  const double cutoff = kRolloff * std::min(1.0, ratio);  // cycles/sample/2
  const double half_width = kZeroCrossings / cutoff;       // input samples
  const std::size_t n_in = w.size();
  const std::size_t n_out =
      static_cast<std::size_t>(std::ceil(static_cast<double>(n_in) * ratio));
  Waveform out;
  out.sample_rate = target_rate;
  out.samples.assign(n_out, 0.0);
  for (std::size_t n = 0; n < n_out; ++n) {
    const double t = static_cast<double>(n) / ratio;
    const long lo = static_cast<long>(std::ceil(t - half_width));
    const long hi = static_cast<long>(std::floor(t + half_width));
    double acc = 0.0;
    for (long k = std::max(lo, 0L);
         k <= std::min(hi, static_cast<long>(n_in) - 1); ++k) {
      const double u = t - static_cast<double>(k);
      const double x = cutoff * u;
      const double sinc =
          x == 0.0 ? 1.0
                   : std::sin(std::numbers::pi * x) / (std::numbers::pi * x);
      const double win =
          0.5 + 0.5 * std::cos(std::numbers::pi * u / half_width);
      acc += w.samples[static_cast<std::size_t>(k)] * cutoff * sinc * win;
    }
    out.samples[n] = acc;
  }
  return out;
}

}  // namespace tta::signal
