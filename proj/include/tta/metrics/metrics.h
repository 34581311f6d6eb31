// include/tta/metrics/metrics.h

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

#ifndef TTA_METRICS_METRICS_H_
#define TTA_METRICS_METRICS_H_

#include <cstddef>

#include "tta/signal/waveform.h"

namespace tta::metrics {

/// Reporting cap for SI-SDR, in dB.
constexpr double kSiSdrCap = 100.0;

/// Scale-invariant SDR: 10 log10(|a x|^2 / |a x - e|^2), a = <e, x> / |x|^2,
/// clamped to +-kSiSdrCap.  Throws undefined-reference for an all-zero x.
double SiSdr(const signal::Waveform &reference,
             const signal::Waveform &estimate);

// Frame grid shared by SSNR, LLR and WSS: 30 ms Hann frames, 75% overlap.
constexpr std::size_t kFrameLen = 480;
constexpr std::size_t kFrameHop = 120;

/// Segmental SNR: per-frame SNR clamped to [-10, 35] dB, averaged over
/// frames whose reference energy is at least 1e-8 of the loudest frame.
/// Throws no-speech-frames when no frame qualifies.
double SegmentalSnr(const signal::Waveform &reference,
                    const signal::Waveform &estimate,
                    std::size_t frame_len = kFrameLen,
                    std::size_t hop = kFrameHop);

/// LPC log-likelihood ratio (order 10 below 10 kHz, 16 above), frame values
/// clipped to [0, 2], mean of the lowest 95%.  Frames whose reference or
/// estimate autocorrelation is singular are skipped and counted in
/// `skipped`.  Throws no-speech-frames when every frame is skipped.
double Llr(const signal::Waveform &reference, const signal::Waveform &estimate,
           std::size_t frame_len = kFrameLen, std::size_t hop = kFrameHop,
           std::size_t *skipped = nullptr);

/// Weighted spectral slope over 25 critical bands, mean of the lowest 95%
/// of frame distortions.
double Wss(const signal::Waveform &reference, const signal::Waveform &estimate,
           std::size_t frame_len = kFrameLen, std::size_t hop = kFrameHop);

struct Composite {
  double csig = 0.0;
  double cbak = 0.0;
  double covl = 0.0;
};

/// Regression composites of PESQ, LLR, WSS and segmental SNR, each clamped
/// to [1, 5].
Composite CompositeMeasures(double pesq, double llr, double wss,
                            double segsnr);

}  // namespace tta::metrics

#endif  // TTA_METRICS_METRICS_H_
