// include/tta/signal/fft.h

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

#ifndef TTA_SIGNAL_FFT_H_
#define TTA_SIGNAL_FFT_H_

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

// Thin wrappers over FFTW3.  Plans are created once per (kind, length) under
// a lock and executed with the thread-safe new-array interface, so all
// functions here are reentrant.

namespace tta::signal {

using Complex = std::complex<double>;

/// Forward real DFT, any length n >= 1; returns n/2 + 1 bins (unnormalized).
std::vector<Complex> Rfft(std::span<const double> x);

/// Inverse of Rfft for a length-n signal; includes the 1/n factor.
std::vector<double> Irfft(std::span<const Complex> bins, std::size_t n);

/// Complex DFT; the inverse includes the 1/n factor.
std::vector<Complex> Fft(std::span<const Complex> x, bool inverse);

}  // namespace tta::signal

#endif  // TTA_SIGNAL_FFT_H_
