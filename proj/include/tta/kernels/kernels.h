// include/tta/kernels/kernels.h

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

#ifndef TTA_KERNELS_KERNELS_H_
#define TTA_KERNELS_KERNELS_H_

#include <cstddef>

// Dense inner loops of the library.  Each kernel exists twice: a serial
// reference under kernels::serial and an OpenMP version under
// kernels::parallel.  Both walk every output element's reduction in the same
// order, so their results are bitwise identical; only the distribution of
// output rows/channels over threads differs.  The unqualified functions in
// kernels:: dispatch to the parallel variant for large problems.

namespace tta::kernels {

/// Shape of a "same"-padded 2-D convolution with square odd kernels.
struct Conv2dShape {
  std::size_t in_channels = 1;
  std::size_t out_channels = 1;
  std::size_t height = 1;  // time
  std::size_t width = 1;   // frequency
  std::size_t kernel = 3;
  std::size_t dilation = 1;
};

namespace serial {

/// C[m x n] += op(A) * op(B), row-major, op(A) is m x k and op(B) is k x n.
void Gemm(bool trans_a, bool trans_b, std::size_t m, std::size_t n,
          std::size_t k, const double *a, const double *b, double *c);

void Conv2dForward(const Conv2dShape &s, const double *in, const double *w,
                   const double *bias, double *out);

/// Accumulates into grad_in / grad_w / grad_bias; any of them may be null.
void Conv2dBackward(const Conv2dShape &s, const double *in, const double *w,
                    const double *grad_out, double *grad_in, double *grad_w,
                    double *grad_bias);

}  // namespace serial

namespace parallel {

void Gemm(bool trans_a, bool trans_b, std::size_t m, std::size_t n,
          std::size_t k, const double *a, const double *b, double *c);

void Conv2dForward(const Conv2dShape &s, const double *in, const double *w,
                   const double *bias, double *out);

void Conv2dBackward(const Conv2dShape &s, const double *in, const double *w,
                    const double *grad_out, double *grad_in, double *grad_w,
                    double *grad_bias);

}  // namespace parallel

void Gemm(bool trans_a, bool trans_b, std::size_t m, std::size_t n,
          std::size_t k, const double *a, const double *b, double *c);

void Conv2dForward(const Conv2dShape &s, const double *in, const double *w,
                   const double *bias, double *out);

void Conv2dBackward(const Conv2dShape &s, const double *in, const double *w,
                    const double *grad_out, double *grad_in, double *grad_w,
                    double *grad_bias);

/// Threads the parallel variants will use (1 when built without OpenMP).
int MaxThreads();

}  // namespace tta::kernels

#endif  // TTA_KERNELS_KERNELS_H_
