// include/tta/signal/envelope.h

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

#ifndef TTA_SIGNAL_ENVELOPE_H_
#define TTA_SIGNAL_ENVELOPE_H_

#include <vector>

#include "tta/signal/fft.h"
#include "tta/signal/waveform.h"

namespace tta::signal {

/// Analytic signal x + j*H{x}: positive frequencies doubled, negative ones
/// zeroed, DC (and Nyquist for even lengths) kept, over the whole signal.
std::vector<Complex> AnalyticSignal(const std::vector<double> &x);

/// |analytic signal|, same length and rate as w.
Waveform HilbertEnvelope(const Waveform &w);

}  // namespace tta::signal

#endif  // TTA_SIGNAL_ENVELOPE_H_
