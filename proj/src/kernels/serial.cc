// src/kernels/serial.cc

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

#include "kernel-bodies.h"
#include "tta/kernels/kernels.h"

namespace tta::kernels::serial {

void Gemm(bool trans_a, bool trans_b, std::size_t m, std::size_t n,
          std::size_t k, const double *a, const double *b, double *c) {
  for (std::size_t i = 0; i < m; ++i)
    detail::GemmRow(trans_a, trans_b, i, m, n, k, a, b, c);
}

void Conv2dForward(const Conv2dShape &s, const double *in, const double *w,
                   const double *bias, double *out) {
  for (std::size_t co = 0; co < s.out_channels; ++co)
    detail::ConvForwardChannel(s, co, in, w, bias, out);
}

void Conv2dBackward(const Conv2dShape &s, const double *in, const double *w,
                    const double *grad_out, double *grad_in, double *grad_w,
                    double *grad_bias) {
  if (grad_in)
    for (std::size_t ci = 0; ci < s.in_channels; ++ci)
      detail::ConvGradInputChannel(s, ci, w, grad_out, grad_in);
  if (grad_w || grad_bias)
    for (std::size_t co = 0; co < s.out_channels; ++co)
      detail::ConvGradWeightChannel(s, co, in, grad_out, grad_w, grad_bias);
}

}  // namespace tta::kernels::serial
