// src/kernels/kernel-bodies.h

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

#ifndef TTA_KERNELS_KERNEL_BODIES_H_
#define TTA_KERNELS_KERNEL_BODIES_H_

// Per-row / per-channel bodies shared by the serial and OpenMP drivers, so
// the two variants cannot drift apart in reduction order.

#include <cstddef>

#include "tta/kernels/kernels.h"

namespace tta::kernels::detail {

inline void GemmRow(bool trans_a, bool trans_b, std::size_t i, std::size_t m,
                    std::size_t n, std::size_t k, const double *a,
                    const double *b, double *c) {
  double *crow = c + i * n;
  if (!trans_b) {
    for (std::size_t p = 0; p < k; ++p) {
      const double av = trans_a ? a[p * m + i] : a[i * k + p];
      if (av == 0.0) continue;
      const double *brow = b + p * n;
      for (std::size_t j = 0; j < n; ++j) crow[j] += av * brow[j];
    }
  } else {
    for (std::size_t j = 0; j < n; ++j) {
      const double *brow = b + j * k;
      double s = 0.0;
      if (!trans_a) {
        const double *arow = a + i * k;
        for (std::size_t p = 0; p < k; ++p) s += arow[p] * brow[p];
      } else {
        for (std::size_t p = 0; p < k; ++p) s += a[p * m + i] * brow[p];
      }
      crow[j] += s;
    }
  }
}

inline long Offset(std::size_t tap, const Conv2dShape &s) {
  return (static_cast<long>(tap) - static_cast<long>(s.kernel / 2)) *
         static_cast<long>(s.dilation);
}

// out[co] = bias[co] + sum_ci w[co, ci] (*) in[ci]
inline void ConvForwardChannel(const Conv2dShape &s, std::size_t co,
                               const double *in, const double *w,
                               const double *bias, double *out) {
  const std::size_t hw = s.height * s.width;
  double *o = out + co * hw;
  const double b0 = bias ? bias[co] : 0.0;
  for (std::size_t i = 0; i < hw; ++i) o[i] = b0;
  const long h = static_cast<long>(s.height), wd = static_cast<long>(s.width);
  for (std::size_t ci = 0; ci < s.in_channels; ++ci) {
    const double *x = in + ci * hw;
    for (std::size_t kt = 0; kt < s.kernel; ++kt) {
      const long dt = Offset(kt, s);
      for (std::size_t kf = 0; kf < s.kernel; ++kf) {
        const long df = Offset(kf, s);
        const double wv =
            w[((co * s.in_channels + ci) * s.kernel + kt) * s.kernel + kf];
        if (wv == 0.0) continue;
        for (long t = 0; t < h; ++t) {
          const long st = t + dt;
          if (st < 0 || st >= h) continue;
          const long f0 = df < 0 ? -df : 0;
          const long f1 = df > 0 ? wd - df : wd;
          const double *xr = x + st * wd + df;
          double *orow = o + t * wd;
          for (long f = f0; f < f1; ++f) orow[f] += wv * xr[f];
        }
      }
    }
  }
}

inline void ConvGradInputChannel(const Conv2dShape &s, std::size_t ci,
                                 const double *w, const double *grad_out,
                                 double *grad_in) {
  const std::size_t hw = s.height * s.width;
  double *gi = grad_in + ci * hw;
  const long h = static_cast<long>(s.height), wd = static_cast<long>(s.width);
  for (std::size_t co = 0; co < s.out_channels; ++co) {
    const double *go = grad_out + co * hw;
    for (std::size_t kt = 0; kt < s.kernel; ++kt) {
      const long dt = Offset(kt, s);
      for (std::size_t kf = 0; kf < s.kernel; ++kf) {
        const long df = Offset(kf, s);
        const double wv =
            w[((co * s.in_channels + ci) * s.kernel + kt) * s.kernel + kf];
        if (wv == 0.0) continue;
        for (long t = 0; t < h; ++t) {
          const long st = t + dt;
          if (st < 0 || st >= h) continue;
          const long f0 = df < 0 ? -df : 0;
          const long f1 = df > 0 ? wd - df : wd;
          double *gr = gi + st * wd + df;
          const double *gorow = go + t * wd;
          for (long f = f0; f < f1; ++f) gr[f] += wv * gorow[f];
        }
      }
    }
  }
}

inline void ConvGradWeightChannel(const Conv2dShape &s, std::size_t co,
                                  const double *in, const double *grad_out,
                                  double *grad_w, double *grad_bias) {
  const std::size_t hw = s.height * s.width;
  const double *go = grad_out + co * hw;
  const long h = static_cast<long>(s.height), wd = static_cast<long>(s.width);
  if (grad_bias) {
    double sb = 0.0;
    for (std::size_t i = 0; i < hw; ++i) sb += go[i];
    grad_bias[co] += sb;
  }
  if (!grad_w) return;
  for (std::size_t ci = 0; ci < s.in_channels; ++ci) {
    const double *x = in + ci * hw;
    for (std::size_t kt = 0; kt < s.kernel; ++kt) {
      const long dt = Offset(kt, s);
      for (std::size_t kf = 0; kf < s.kernel; ++kf) {
        const long df = Offset(kf, s);
        double acc = 0.0;
        for (long t = 0; t < h; ++t) {
          const long st = t + dt;
          if (st < 0 || st >= h) continue;
          const long f0 = df < 0 ? -df : 0;
          const long f1 = df > 0 ? wd - df : wd;
          const double *xr = x + st * wd + df;
          const double *gorow = go + t * wd;
          for (long f = f0; f < f1; ++f) acc += gorow[f] * xr[f];
        }
        grad_w[((co * s.in_channels + ci) * s.kernel + kt) * s.kernel + kf] +=
            acc;
      }
    }
  }
}

}  // namespace tta::kernels::detail

#endif  // TTA_KERNELS_KERNEL_BODIES_H_
