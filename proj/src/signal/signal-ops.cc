// src/signal/signal-ops.cc

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

#include "tta/signal/signal-ops.h"

#include <cmath>

#include "tta/base/error.h"
#include "tta/signal/envelope.h"

namespace tta::signal {
namespace {
constexpr double kTinyWindowSum = 1e-10;
}  // namespace

ad::Var MaskedIstft(const ad::Var &mask, const Spectrogram &noisy) {
  const Tensor &m = mask.value();
  const std::size_t frames = noisy.num_frames(), bins = noisy.num_bins();
  TTA_REQUIRE(m.rank() == 2 && m.rows() == frames && m.cols() == bins,
              ErrorCode::kInvalidArgument,
              "mask shape " + m.ShapeString() + " does not match spectrogram");
  const std::size_t n = noisy.frame_len, hop = noisy.hop;
  const std::vector<double> win = MakeWindow(noisy.window, n);
  const std::vector<double> norm = WindowSumSquare(win, frames, hop);
  std::vector<Complex> ybins(frames * bins);
  for (std::size_t t = 0; t < frames; ++t)
    for (std::size_t f = 0; f < bins; ++f) ybins[t * bins + f] = noisy.Bin(t, f);

  Tensor out({norm.size()});
  std::vector<Complex> z(bins);
  for (std::size_t t = 0; t < frames; ++t) {
    for (std::size_t f = 0; f < bins; ++f)
      z[f] = m.at(t, f) * ybins[t * bins + f];
    const std::vector<double> frame = Irfft(z, n);
    for (std::size_t i = 0; i < n; ++i) out[t * hop + i] += win[i] * frame[i];
  }
  for (std::size_t i = 0; i < norm.size(); ++i)
    out[i] = norm[i] > kTinyWindowSum ? out[i] / norm[i] : 0.0;

  return mask.tape()->Record(
      std::move(out), {mask},
      [ybins = std::move(ybins), win, norm, frames, bins, n, hop](
          const Tensor &, const Tensor &g, std::span<Tensor *const> pg) {
        if (!pg[0]) return;
        std::vector<double> u(n);
        for (std::size_t t = 0; t < frames; ++t) {
          for (std::size_t i = 0; i < n; ++i) {
            const std::size_t j = t * hop + i;
            u[i] = norm[j] > kTinyWindowSum ? g[j] * win[i] / norm[j] : 0.0;
          }
          const std::vector<Complex> U = Rfft(u);
          for (std::size_t f = 0; f < bins; ++f) {
            const double c = (f == 0 || 2 * f == n) ? 1.0 : 2.0;
            (*pg[0])[t * bins + f] +=
                c / static_cast<double>(n) *
                (ybins[t * bins + f] * std::conj(U[f])).real();
          }
        }
      });
}

ad::Var HilbertEnvelope(const ad::Var &x) {
  const Tensor &xv = x.value();
  TTA_REQUIRE(xv.size() >= 1, ErrorCode::kInvalidArgument,
              "envelope of an empty signal");
  std::vector<Complex> a = AnalyticSignal(xv.storage());
  Tensor env({a.size()});
  for (std::size_t i = 0; i < a.size(); ++i) env[i] = std::abs(a[i]);
  return x.tape()->Record(
      std::move(env), {x},
      [a = std::move(a)](const Tensor &env, const Tensor &g,
                         std::span<Tensor *const> pg) {
        if (!pg[0]) return;
        const std::size_t len = a.size();
        // The analytic-signal operator is self-adjoint, so the input
        // gradient is Re(H g) with g the complex output gradient.
        std::vector<Complex> gc(len);
        for (std::size_t i = 0; i < len; ++i)
          gc[i] = env[i] > 0.0 ? g[i] * a[i] / env[i] : Complex(0.0, 0.0);
        std::vector<Complex> spec = Fft(gc, /*inverse=*/false);
        const std::size_t last = (len % 2 == 0) ? len / 2 : (len + 1) / 2;
        for (std::size_t k = 1; k < len; ++k) {
          if (k < last)
            spec[k] *= 2.0;
          else if (!(len % 2 == 0 && k == len / 2))
            spec[k] = 0.0;
        }
        const std::vector<Complex> back = Fft(spec, /*inverse=*/true);
        for (std::size_t i = 0; i < len; ++i) (*pg[0])[i] += back[i].real();
      });
}

}  // namespace tta::signal
