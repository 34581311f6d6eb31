// include/tta/signal/resample.h

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

#ifndef TTA_SIGNAL_RESAMPLE_H_
#define TTA_SIGNAL_RESAMPLE_H_

#include "tta/signal/waveform.h"

namespace tta::signal {

/// Band-limited resampling with a Hann-windowed sinc kernel spanning 16
/// zero crossings on each side; cutoff at 0.97 of the lower Nyquist rate.
/// Output length is ceil(n * target_rate / rate).
Waveform Resample(const Waveform &w, int target_rate);

}  // namespace tta::signal

#endif  // TTA_SIGNAL_RESAMPLE_H_
