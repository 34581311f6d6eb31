// include/tta/autodiff/ops.h

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

#ifndef TTA_AUTODIFF_OPS_H_
#define TTA_AUTODIFF_OPS_H_

#include <cstddef>
#include <vector>

#include "tta/autodiff/tape.h"

// Differentiable tensor operations.  All operands must live on the same
// tape.  Shapes follow the row-major convention of Tensor: a "T x H" grid is
// T time steps of H features.

namespace tta::ad {

Var Add(const Var &a, const Var &b);
Var Sub(const Var &a, const Var &b);
Var Mul(const Var &a, const Var &b);
Var Scale(const Var &a, double s);
Var AddScalar(const Var &a, double s);

/// x [T x H] + b [H] broadcast over rows.
Var AddBias(const Var &x, const Var &b);

/// op(a) * op(b) for rank-2 operands; trans_a && trans_b is not supported.
Var MatMul(const Var &a, const Var &b, bool trans_a = false,
           bool trans_b = false);

/// x [T x in] * w [in x out] + b [out].
Var Linear(const Var &x, const Var &w, const Var &b);

Var Gelu(const Var &x);
Var Softplus(const Var &x);
Var Tanh(const Var &x);

/// Row-wise layer normalization with affine gamma/beta [H].
Var LayerNorm(const Var &x, const Var &gamma, const Var &beta,
              double eps = 1e-5);

/// Zero-mean, unit-variance normalization over all elements.
Var Standardize(const Var &x, double eps = 1e-10);

/// Scaled dot-product attention over the rows (time) of q, k, v [T x H]
/// with H split into `heads` equal groups.  No masking, no positional terms.
Var MultiHeadAttention(const Var &q, const Var &k, const Var &v,
                       std::size_t heads);

/// "Same"-padded 2-D convolution.  x is [Cin x T x F] (or [T x F] for a
/// single channel), w is [Cout x Cin x K x K], b is [Cout]; the result is
/// [Cout x T x F].
Var Conv2d(const Var &x, const Var &w, const Var &b, std::size_t dilation);

Var Reshape(const Var &x, std::vector<std::size_t> shape);

/// Contiguous slice [start, start + len) of a rank-1 tensor.
Var Crop(const Var &x, std::size_t start, std::size_t len);

Var Sum(const Var &x);
Var Dot(const Var &a, const Var &b);
/// Mean over rows: [T x D] -> [D].
Var MeanRows(const Var &x);
/// Each row divided by sqrt(|row|^2 + eps).
Var L2NormalizeRows(const Var &x, double eps = 1e-12);

/// Cosine similarity of two equally sized tensors viewed as vectors.
/// Callers are responsible for rejecting zero-norm operands.
Var Cosine(const Var &a, const Var &b);

/// Per-row cosine similarity of a and b [T x L] -> [T]; rows where either
/// side has zero norm yield 0 and pass no gradient.
Var RowCosine(const Var &a, const Var &b);

/// Frames a rank-1 signal into [T x frame_len] windows with zero-padded
/// tail, T = ceil(max(n - frame_len, 0) / hop) + 1.
Var Frame(const Var &x, std::size_t frame_len, std::size_t hop);

/// mean((a - b)^2).
Var MeanSquaredError(const Var &a, const Var &b);

}  // namespace tta::ad

#endif  // TTA_AUTODIFF_OPS_H_
