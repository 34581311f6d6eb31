// src/data/mix.cc

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

#include "tta/data/mix.h"

#include <cmath>

#include "tta/base/error.h"

namespace tta::data {

signal::Waveform NoiseSegment(const signal::Waveform &noise,
                              std::size_t offset, std::size_t length) {
  TTA_REQUIRE(!noise.samples.empty(), ErrorCode::kInvalidArgument,
              "empty noise signal");
  signal::Waveform seg;
  seg.sample_rate = noise.sample_rate;
  seg.samples.resize(length);
  const std::size_t n = noise.size();
  for (std::size_t i = 0; i < length; ++i)
    seg.samples[i] = noise.samples[(offset + i) % n];
  return seg;
}

MixResult MixDetailed(const signal::Waveform &clean,
                      const signal::Waveform &noise, std::size_t offset,
                      double snr_db) {
  signal::CheckWaveform(clean);
  signal::CheckWaveform(noise);
  TTA_REQUIRE(clean.sample_rate == noise.sample_rate,
              ErrorCode::kInvalidArgument,
              "clean and noise sample rates differ");
  TTA_REQUIRE(std::isfinite(snr_db), ErrorCode::kInvalidArgument,
              "SNR must be finite");
  MixResult r;
  r.scaled_noise = NoiseSegment(noise, offset, clean.size());
  const double p_clean = clean.Power();
  const double p_noise = r.scaled_noise.Power();
  TTA_REQUIRE(p_clean > 0.0 && p_noise > 0.0, ErrorCode::kCannotSetSnr,
              "zero-power clean or noise segment");
  r.noise_scale = std::sqrt(p_clean / (p_noise * std::pow(10.0, snr_db / 10.0)));
  for (double &v : r.scaled_noise.samples) v *= r.noise_scale;
  r.noisy = clean;
  for (std::size_t i = 0; i < clean.size(); ++i)
    r.noisy.samples[i] += r.scaled_noise.samples[i];
  return r;
}

signal::Waveform Mix(const signal::Waveform &clean,
                     const signal::Waveform &noise, std::size_t offset,
                     double snr_db) {
  return MixDetailed(clean, noise, offset, snr_db).noisy;
}

}  // namespace tta::data
