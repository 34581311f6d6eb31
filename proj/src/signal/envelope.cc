// src/signal/envelope.cc

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

#include "tta/signal/envelope.h"

#include <cmath>

#include "tta/base/error.h"

namespace tta::signal {

std::vector<Complex> AnalyticSignal(const std::vector<double> &x) {
  const std::size_t n = x.size();
  TTA_REQUIRE(n >= 1, ErrorCode::kInvalidArgument,
              "analytic signal of an empty input");
  const std::vector<Complex> half = Rfft(x);
  std::vector<Complex> full(n, Complex(0.0, 0.0));
  full[0] = half[0];
  const std::size_t last = (n % 2 == 0) ? n / 2 : (n + 1) / 2;
  for (std::size_t k = 1; k < last; ++k) full[k] = 2.0 * half[k];
  if (n % 2 == 0 && n > 1) full[n / 2] = half[n / 2];
  return Fft(full, /*inverse=*/true);
}

Waveform HilbertEnvelope(const Waveform &w) {
  TTA_REQUIRE(!w.samples.empty(), ErrorCode::kInvalidArgument,
              "envelope of an empty waveform");
  CheckWaveform(w);
  const std::vector<Complex> a = AnalyticSignal(w.samples);
  Waveform env;
  env.sample_rate = w.sample_rate;
  env.samples.resize(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) env.samples[i] = std::abs(a[i]);
  return env;
}

}  // namespace tta::signal
