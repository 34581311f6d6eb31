// src/kernels/parallel.cc

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

#include <cstddef>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "kernel-bodies.h"
#include "tta/kernels/kernels.h"

namespace tta::kernels {

namespace parallel {

void Gemm(bool trans_a, bool trans_b, std::size_t m, std::size_t n,
          std::size_t k, const double *a, const double *b, double *c) {
  const std::ptrdiff_t rows = static_cast<std::ptrdiff_t>(m);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < rows; ++i)
    detail::GemmRow(trans_a, trans_b, static_cast<std::size_t>(i), m, n, k, a,
                    b, c);
}

void Conv2dForward(const Conv2dShape &s, const double *in, const double *w,
                   const double *bias, double *out) {
  const std::ptrdiff_t nco = static_cast<std::ptrdiff_t>(s.out_channels);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t co = 0; co < nco; ++co)
    detail::ConvForwardChannel(s, static_cast<std::size_t>(co), in, w, bias,
                               out);
}

void Conv2dBackward(const Conv2dShape &s, const double *in, const double *w,
                    const double *grad_out, double *grad_in, double *grad_w,
                    double *grad_bias) {
  const std::ptrdiff_t nci = static_cast<std::ptrdiff_t>(s.in_channels);
  const std::ptrdiff_t nco = static_cast<std::ptrdiff_t>(s.out_channels);
  if (grad_in) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t ci = 0; ci < nci; ++ci)
      detail::ConvGradInputChannel(s, static_cast<std::size_t>(ci), w,
                                   grad_out, grad_in);
  }
  if (grad_w || grad_bias) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t co = 0; co < nco; ++co)
      detail::ConvGradWeightChannel(s, static_cast<std::size_t>(co), in,
                                    grad_out, grad_w, grad_bias);
  }
}

}  // namespace parallel

namespace {
// Below this many multiply-adds the fork/join overhead dominates.
constexpr std::size_t kParallelWork = 1u << 16;
}  // namespace

int MaxThreads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void Gemm(bool trans_a, bool trans_b, std::size_t m, std::size_t n,
          std::size_t k, const double *a, const double *b, double *c) {
  if (MaxThreads() > 1 && m > 1 && m * n * k >= kParallelWork)
    parallel::Gemm(trans_a, trans_b, m, n, k, a, b, c);
  else
    serial::Gemm(trans_a, trans_b, m, n, k, a, b, c);
}

void Conv2dForward(const Conv2dShape &s, const double *in, const double *w,
                   const double *bias, double *out) {
  if (MaxThreads() > 1 && s.out_channels > 1)
    parallel::Conv2dForward(s, in, w, bias, out);
  else
    serial::Conv2dForward(s, in, w, bias, out);
}

void Conv2dBackward(const Conv2dShape &s, const double *in, const double *w,
                    const double *grad_out, double *grad_in, double *grad_w,
                    double *grad_bias) {
  if (MaxThreads() > 1)
    parallel::Conv2dBackward(s, in, w, grad_out, grad_in, grad_w, grad_bias);
  else
    serial::Conv2dBackward(s, in, w, grad_out, grad_in, grad_w, grad_bias);
}

}  // namespace tta::kernels
