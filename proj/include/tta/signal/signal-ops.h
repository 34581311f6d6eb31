// include/tta/signal/signal-ops.h

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

#ifndef TTA_SIGNAL_SIGNAL_OPS_H_
#define TTA_SIGNAL_SIGNAL_OPS_H_

#include "tta/autodiff/tape.h"
#include "tta/signal/stft.h"

// Differentiable counterparts of the DSP primitives, for use inside losses.

namespace tta::signal {

/// istft(mask (.) Y) where Y is the complex spectrogram `noisy` (noisy
/// phase reused).  mask is [T x F]; the result is the full-length
/// overlap-add output of (T - 1) * hop + frame_len samples.  Differentiable
/// with respect to the mask.
ad::Var MaskedIstft(const ad::Var &mask, const Spectrogram &noisy);

/// |analytic signal| of a rank-1 signal; differentiable with respect to x.
ad::Var HilbertEnvelope(const ad::Var &x);

}  // namespace tta::signal

#endif  // TTA_SIGNAL_SIGNAL_OPS_H_
