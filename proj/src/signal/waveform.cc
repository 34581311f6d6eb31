// src/signal/waveform.cc

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

#include "tta/signal/waveform.h"

#include <cmath>

#include "tta/base/error.h"

namespace tta::signal {

double Waveform::Energy() const {
  double e = 0.0;
  for (double v : samples) e += v * v;
  return e;
}

double Waveform::Power() const {
  return samples.empty() ? 0.0 : Energy() / static_cast<double>(size());
}

void CheckWaveform(const Waveform &w) {
  TTA_REQUIRE(w.sample_rate > 0, ErrorCode::kInvalidArgument,
              "sample rate must be positive");
  TTA_REQUIRE(!w.samples.empty(), ErrorCode::kInvalidArgument,
              "waveform is empty");
  for (double v : w.samples)
    TTA_REQUIRE(std::isfinite(v), ErrorCode::kInvalidSignal,
                "waveform contains non-finite samples");
}

Waveform Scaled(const Waveform &w, double gain) {
  Waveform out = w;
  for (double &v : out.samples) v *= gain;
  return out;
}

}  // namespace tta::signal
