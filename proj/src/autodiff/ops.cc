// src/autodiff/ops.cc

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

#include "tta/autodiff/ops.h"

#include <algorithm>
#include <cmath>

#include "tta/base/error.h"
#include "tta/kernels/kernels.h"

namespace tta::ad {
namespace {

void RequireSameShape(const Var &a, const Var &b, const char *op) {
  TTA_REQUIRE(a.value().SameShape(b.value()), ErrorCode::kInvalidArgument,
              std::string(op) + ": shape mismatch " +
                  a.value().ShapeString() + " vs " + b.value().ShapeString());
}

void Accumulate(Tensor *dst, const Tensor &src, double scale = 1.0) {
  if (!dst) return;
  double *d = dst->data();
  const double *s = src.data();
  for (std::size_t i = 0; i < src.size(); ++i) d[i] += scale * s[i];
}

template <typename Fwd, typename Deriv>
Var Elementwise(const Var &x, Fwd fwd, Deriv deriv) {
  Tensor out(x.value().shape());
  const Tensor &xv = x.value();
  for (std::size_t i = 0; i < xv.size(); ++i) out[i] = fwd(xv[i]);
  return x.tape()->Record(
      std::move(out), {x},
      [x, deriv](const Tensor &y, const Tensor &g,
                 std::span<Tensor *const> pg) {
        if (!pg[0]) return;
        const Tensor &xv = x.value();
        Tensor &gx = *pg[0];
        for (std::size_t i = 0; i < xv.size(); ++i)
          gx[i] += g[i] * deriv(xv[i], y[i]);
      });
}

}  // namespace

Var Add(const Var &a, const Var &b) {
  RequireSameShape(a, b, "Add");
  Tensor out = a.value();
  Accumulate(&out, b.value());
  return a.tape()->Record(std::move(out), {a, b},
                          [](const Tensor &, const Tensor &g,
                             std::span<Tensor *const> pg) {
                            Accumulate(pg[0], g);
                            Accumulate(pg[1], g);
                          });
}

Var Sub(const Var &a, const Var &b) {
  RequireSameShape(a, b, "Sub");
  Tensor out = a.value();
  Accumulate(&out, b.value(), -1.0);
  return a.tape()->Record(std::move(out), {a, b},
                          [](const Tensor &, const Tensor &g,
                             std::span<Tensor *const> pg) {
                            Accumulate(pg[0], g);
                            Accumulate(pg[1], g, -1.0);
                          });
}

Var Mul(const Var &a, const Var &b) {
  RequireSameShape(a, b, "Mul");
  Tensor out(a.value().shape());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = a.value()[i] * b.value()[i];
  return a.tape()->Record(
      std::move(out), {a, b},
      [a, b](const Tensor &, const Tensor &g, std::span<Tensor *const> pg) {
        for (std::size_t i = 0; i < g.size(); ++i) {
          if (pg[0]) (*pg[0])[i] += g[i] * b.value()[i];
          if (pg[1]) (*pg[1])[i] += g[i] * a.value()[i];
        }
      });
}

Var Scale(const Var &a, double s) {
  Tensor out = a.value();
  for (double &v : out.storage()) v *= s;
  return a.tape()->Record(std::move(out), {a},
                          [s](const Tensor &, const Tensor &g,
                              std::span<Tensor *const> pg) {
                            Accumulate(pg[0], g, s);
                          });
}

Var AddScalar(const Var &a, double s) {
  Tensor out = a.value();
  for (double &v : out.storage()) v += s;
  return a.tape()->Record(std::move(out), {a},
                          [](const Tensor &, const Tensor &g,
                             std::span<Tensor *const> pg) {
                            Accumulate(pg[0], g);
                          });
}

Var AddBias(const Var &x, const Var &b) {
  const Tensor &xv = x.value();
  TTA_REQUIRE(xv.rank() == 2 && b.value().size() == xv.cols(),
              ErrorCode::kInvalidArgument, "AddBias: shape mismatch");
  Tensor out = xv;
  const std::size_t rows = xv.rows(), cols = xv.cols();
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) out.at(r, c) += b.value()[c];
  return x.tape()->Record(
      std::move(out), {x, b},
      [rows, cols](const Tensor &, const Tensor &g,
                   std::span<Tensor *const> pg) {
        Accumulate(pg[0], g);
        if (pg[1])
          for (std::size_t r = 0; r < rows; ++r)
            for (std::size_t c = 0; c < cols; ++c)
              (*pg[1])[c] += g[r * cols + c];
      });
}

Var MatMul(const Var &a, const Var &b, bool trans_a, bool trans_b) {
  const Tensor &av = a.value(), &bv = b.value();
  TTA_REQUIRE(av.rank() == 2 && bv.rank() == 2, ErrorCode::kInvalidArgument,
              "MatMul: operands must be rank 2");
  TTA_REQUIRE(!(trans_a && trans_b), ErrorCode::kInvalidArgument,
              "MatMul: double transpose unsupported");
  const std::size_t m = trans_a ? av.cols() : av.rows();
  const std::size_t k = trans_a ? av.rows() : av.cols();
  const std::size_t kb = trans_b ? bv.cols() : bv.rows();
  const std::size_t n = trans_b ? bv.rows() : bv.cols();
  TTA_REQUIRE(k == kb, ErrorCode::kInvalidArgument,
              "MatMul: inner dimension mismatch " + av.ShapeString() + " " +
                  bv.ShapeString());
  Tensor out({m, n});
  kernels::Gemm(trans_a, trans_b, m, n, k, av.data(), bv.data(), out.data());
  return a.tape()->Record(
      std::move(out), {a, b},
      [a, b, trans_a, trans_b, m, n, k](const Tensor &, const Tensor &g,
                                        std::span<Tensor *const> pg) {
        const double *A = a.value().data(), *B = b.value().data();
        if (!trans_a && !trans_b) {
          // C = A B: dA = dC B^T, dB = A^T dC
          if (pg[0]) kernels::Gemm(false, true, m, k, n, g.data(), B,
                                   pg[0]->data());
          if (pg[1]) kernels::Gemm(true, false, k, n, m, A, g.data(),
                                   pg[1]->data());
        } else if (!trans_a && trans_b) {
          // C = A B^T: dA = dC B, dB = dC^T A
          if (pg[0]) kernels::Gemm(false, false, m, k, n, g.data(), B,
                                   pg[0]->data());
          if (pg[1]) kernels::Gemm(true, false, n, k, m, g.data(), A,
                                   pg[1]->data());
        } else {
          // C = A^T B: dA = B dC^T, dB = A dC
          if (pg[0]) kernels::Gemm(false, true, k, m, n, B, g.data(),
                                   pg[0]->data());
          if (pg[1]) kernels::Gemm(false, false, k, n, m, A, g.data(),
                                   pg[1]->data());
        }
      });
}

Var Linear(const Var &x, const Var &w, const Var &b) {
  return AddBias(MatMul(x, w), b);
}

Var Gelu(const Var &x) {
  // tanh approximation; smooth everywhere.
  constexpr double kC = 0.7978845608028654;  // sqrt(2 / pi)
  constexpr double kA = 0.044715;
  return Elementwise(
      x,
      [](double v) {
        return 0.5 * v * (1.0 + std::tanh(kC * (v + kA * v * v * v)));
      },
      [](double v, double) {
        const double u = kC * (v + kA * v * v * v);
        const double th = std::tanh(u);
        const double du = kC * (1.0 + 3.0 * kA * v * v);
        return 0.5 * (1.0 + th) + 0.5 * v * (1.0 - th * th) * du;
      });
}

Var Softplus(const Var &x) {
  return Elementwise(
      x,
      [](double v) {
        return v > 0 ? v + std::log1p(std::exp(-v)) : std::log1p(std::exp(v));
      },
      [](double v, double) {
        return v >= 0 ? 1.0 / (1.0 + std::exp(-v))
                      : std::exp(v) / (1.0 + std::exp(v));
      });
}

Var Tanh(const Var &x) {
  return Elementwise(
      x, [](double v) { return std::tanh(v); },
      [](double, double y) { return 1.0 - y * y; });
}

Var LayerNorm(const Var &x, const Var &gamma, const Var &beta, double eps) {
  const Tensor &xv = x.value();
  TTA_REQUIRE(xv.rank() == 2 && gamma.value().size() == xv.cols() &&
                  beta.value().size() == xv.cols(),
              ErrorCode::kInvalidArgument, "LayerNorm: shape mismatch");
  const std::size_t rows = xv.rows(), cols = xv.cols();
  Tensor xhat({rows, cols});
  std::vector<double> inv_std(rows);
  Tensor out({rows, cols});
  for (std::size_t r = 0; r < rows; ++r) {
    const double *row = xv.data() + r * cols;
    double mu = 0.0;
    for (std::size_t c = 0; c < cols; ++c) mu += row[c];
    mu /= static_cast<double>(cols);
    double var = 0.0;
    for (std::size_t c = 0; c < cols; ++c) var += (row[c] - mu) * (row[c] - mu);
    var /= static_cast<double>(cols);
    inv_std[r] = 1.0 / std::sqrt(var + eps);
    for (std::size_t c = 0; c < cols; ++c) {
      xhat.at(r, c) = (row[c] - mu) * inv_std[r];
      out.at(r, c) = gamma.value()[c] * xhat.at(r, c) + beta.value()[c];
    }
  }
  return x.tape()->Record(
      std::move(out), {x, gamma, beta},
      [gamma, xhat = std::move(xhat), inv_std = std::move(inv_std), rows,
       cols](const Tensor &, const Tensor &g, std::span<Tensor *const> pg) {
        const double inv_n = 1.0 / static_cast<double>(cols);
        std::vector<double> dxhat(cols);
        for (std::size_t r = 0; r < rows; ++r) {
          double mean_d = 0.0, mean_dx = 0.0;
          for (std::size_t c = 0; c < cols; ++c) {
            const double gv = g[r * cols + c];
            const double xh = xhat[r * cols + c];
            if (pg[1]) (*pg[1])[c] += gv * xh;
            if (pg[2]) (*pg[2])[c] += gv;
            dxhat[c] = gv * gamma.value()[c];
            mean_d += dxhat[c];
            mean_dx += dxhat[c] * xh;
          }
          if (!pg[0]) continue;
          mean_d *= inv_n;
          mean_dx *= inv_n;
          for (std::size_t c = 0; c < cols; ++c)
            (*pg[0])[r * cols + c] +=
                inv_std[r] * (dxhat[c] - mean_d - xhat[r * cols + c] * mean_dx);
        }
      });
}

Var Standardize(const Var &x, double eps) {
  const Tensor &xv = x.value();
  const std::size_t n = xv.size();
  TTA_REQUIRE(n > 0, ErrorCode::kInvalidArgument, "Standardize: empty input");
  double mu = 0.0;
  for (double v : xv.values()) mu += v;
  mu /= static_cast<double>(n);
  double var = 0.0;
  for (double v : xv.values()) var += (v - mu) * (v - mu);
  var /= static_cast<double>(n);
  const double inv_std = 1.0 / std::sqrt(var + eps);
  Tensor out(xv.shape());
  for (std::size_t i = 0; i < n; ++i) out[i] = (xv[i] - mu) * inv_std;
  return x.tape()->Record(
      std::move(out), {x},
      [inv_std, n](const Tensor &y, const Tensor &g,
                   std::span<Tensor *const> pg) {
        if (!pg[0]) return;
        double mean_g = 0.0, mean_gy = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          mean_g += g[i];
          mean_gy += g[i] * y[i];
        }
        mean_g /= static_cast<double>(n);
        mean_gy /= static_cast<double>(n);
        for (std::size_t i = 0; i < n; ++i)
          (*pg[0])[i] += inv_std * (g[i] - mean_g - y[i] * mean_gy);
      });
}

namespace {

// Copies columns [c0, c0 + w) of a T x H matrix into a contiguous T x w one.
void GatherCols(const Tensor &src, std::size_t c0, std::size_t w,
                std::vector<double> *dst) {
  const std::size_t rows = src.rows(), cols = src.cols();
  dst->assign(rows * w, 0.0);
  for (std::size_t r = 0; r < rows; ++r)
    std::copy_n(src.data() + r * cols + c0, w, dst->data() + r * w);
}

void ScatterAddCols(const std::vector<double> &src, std::size_t c0,
                    std::size_t w, Tensor *dst) {
  const std::size_t rows = dst->rows(), cols = dst->cols();
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < w; ++c)
      (*dst)[r * cols + c0 + c] += src[r * w + c];
}

}  // namespace

Var MultiHeadAttention(const Var &q, const Var &k, const Var &v,
                       std::size_t heads) {
  RequireSameShape(q, k, "MultiHeadAttention");
  RequireSameShape(q, v, "MultiHeadAttention");
  const Tensor &qv = q.value();
  TTA_REQUIRE(qv.rank() == 2 && heads >= 1 && qv.cols() % heads == 0,
              ErrorCode::kInvalidArgument,
              "MultiHeadAttention: feature dim not divisible by heads");
  const std::size_t steps = qv.rows(), dim = qv.cols(), dh = dim / heads;
  const double scale = 1.0 / std::sqrt(static_cast<double>(dh));
  // probs[h] is the T x T attention matrix of head h.
  std::vector<std::vector<double>> probs(heads);
  Tensor out({steps, dim});
  std::vector<double> qh, kh, vh, oh;
  for (std::size_t h = 0; h < heads; ++h) {
    GatherCols(qv, h * dh, dh, &qh);
    GatherCols(k.value(), h * dh, dh, &kh);
    GatherCols(v.value(), h * dh, dh, &vh);
    std::vector<double> &p = probs[h];
    p.assign(steps * steps, 0.0);
    kernels::Gemm(false, true, steps, steps, dh, qh.data(), kh.data(),
                  p.data());
    for (std::size_t i = 0; i < steps; ++i) {
      double *row = p.data() + i * steps;
      double mx = row[0] * scale;
      for (std::size_t j = 0; j < steps; ++j) {
        row[j] *= scale;
        mx = std::max(mx, row[j]);
      }
      double z = 0.0;
      for (std::size_t j = 0; j < steps; ++j) {
        row[j] = std::exp(row[j] - mx);
        z += row[j];
      }
      for (std::size_t j = 0; j < steps; ++j) row[j] /= z;
    }
    oh.assign(steps * dh, 0.0);
    kernels::Gemm(false, false, steps, dh, steps, p.data(), vh.data(),
                  oh.data());
    ScatterAddCols(oh, h * dh, dh, &out);
  }
  return q.tape()->Record(
      std::move(out), {q, k, v},
      [q, k, v, probs = std::move(probs), heads, steps, dh, scale](
          const Tensor &, const Tensor &g, std::span<Tensor *const> pg) {
        std::vector<double> qh, kh, vh, gh, dp, ds, tmp;
        for (std::size_t h = 0; h < heads; ++h) {
          const std::vector<double> &p = probs[h];
          GatherCols(g, h * dh, dh, &gh);
          GatherCols(v.value(), h * dh, dh, &vh);
          if (pg[2]) {
            tmp.assign(steps * dh, 0.0);
            kernels::Gemm(true, false, steps, dh, steps, p.data(), gh.data(),
                          tmp.data());
            ScatterAddCols(tmp, h * dh, dh, pg[2]);
          }
          if (!pg[0] && !pg[1]) continue;
          dp.assign(steps * steps, 0.0);
          kernels::Gemm(false, true, steps, steps, dh, gh.data(), vh.data(),
                        dp.data());
          ds.assign(steps * steps, 0.0);
          for (std::size_t i = 0; i < steps; ++i) {
            double dot = 0.0;
            for (std::size_t j = 0; j < steps; ++j)
              dot += dp[i * steps + j] * p[i * steps + j];
            for (std::size_t j = 0; j < steps; ++j)
              ds[i * steps + j] =
                  scale * p[i * steps + j] * (dp[i * steps + j] - dot);
          }
          if (pg[0]) {
            GatherCols(k.value(), h * dh, dh, &kh);
            tmp.assign(steps * dh, 0.0);
            kernels::Gemm(false, false, steps, dh, steps, ds.data(), kh.data(),
                          tmp.data());
            ScatterAddCols(tmp, h * dh, dh, pg[0]);
          }
          if (pg[1]) {
            GatherCols(q.value(), h * dh, dh, &qh);
            tmp.assign(steps * dh, 0.0);
            kernels::Gemm(true, false, steps, dh, steps, ds.data(), qh.data(),
                          tmp.data());
            ScatterAddCols(tmp, h * dh, dh, pg[1]);
          }
        }
      });
}

Var Conv2d(const Var &x, const Var &w, const Var &b, std::size_t dilation) {
  const Tensor &xv = x.value(), &wv = w.value();
  TTA_REQUIRE(xv.rank() == 2 || xv.rank() == 3, ErrorCode::kInvalidArgument,
              "Conv2d: input must be [T x F] or [C x T x F]");
  TTA_REQUIRE(wv.rank() == 4 && wv.dim(2) == wv.dim(3) && wv.dim(2) % 2 == 1,
              ErrorCode::kInvalidArgument,
              "Conv2d: weight must be [Cout x Cin x K x K] with odd K");
  kernels::Conv2dShape s;
  s.in_channels = xv.rank() == 3 ? xv.dim(0) : 1;
  s.height = xv.rank() == 3 ? xv.dim(1) : xv.dim(0);
  s.width = xv.rank() == 3 ? xv.dim(2) : xv.dim(1);
  s.out_channels = wv.dim(0);
  s.kernel = wv.dim(2);
  s.dilation = dilation;
  TTA_REQUIRE(wv.dim(1) == s.in_channels && b.value().size() == s.out_channels,
              ErrorCode::kInvalidArgument, "Conv2d: channel mismatch");
  Tensor out({s.out_channels, s.height, s.width});
  kernels::Conv2dForward(s, xv.data(), wv.data(), b.value().data(),
                         out.data());
  return x.tape()->Record(
      std::move(out), {x, w, b},
      [x, w, s](const Tensor &, const Tensor &g, std::span<Tensor *const> pg) {
        kernels::Conv2dBackward(s, x.value().data(), w.value().data(),
                                g.data(), pg[0] ? pg[0]->data() : nullptr,
                                pg[1] ? pg[1]->data() : nullptr,
                                pg[2] ? pg[2]->data() : nullptr);
      });
}

Var Reshape(const Var &x, std::vector<std::size_t> shape) {
  Tensor out = x.value().Reshaped(std::move(shape));
  return x.tape()->Record(std::move(out), {x},
                          [](const Tensor &, const Tensor &g,
                             std::span<Tensor *const> pg) {
                            Accumulate(pg[0], g);
                          });
}

Var Crop(const Var &x, std::size_t start, std::size_t len) {
  const Tensor &xv = x.value();
  TTA_REQUIRE(start + len <= xv.size(), ErrorCode::kInvalidArgument,
              "Crop: range exceeds input");
  std::vector<double> d(xv.data() + start, xv.data() + start + len);
  return x.tape()->Record(Tensor::Vector(std::move(d)), {x},
                          [start, len](const Tensor &, const Tensor &g,
                                       std::span<Tensor *const> pg) {
                            if (!pg[0]) return;
                            for (std::size_t i = 0; i < len; ++i)
                              (*pg[0])[start + i] += g[i];
                          });
}

Var Sum(const Var &x) {
  double s = 0.0;
  for (double v : x.value().values()) s += v;
  return x.tape()->Record(Tensor::Scalar(s), {x},
                          [](const Tensor &, const Tensor &g,
                             std::span<Tensor *const> pg) {
                            if (!pg[0]) return;
                            for (double &v : pg[0]->storage()) v += g[0];
                          });
}

Var Dot(const Var &a, const Var &b) {
  TTA_REQUIRE(a.value().size() == b.value().size(),
              ErrorCode::kInvalidArgument, "Dot: size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.value().size(); ++i)
    s += a.value()[i] * b.value()[i];
  return a.tape()->Record(
      Tensor::Scalar(s), {a, b},
      [a, b](const Tensor &, const Tensor &g, std::span<Tensor *const> pg) {
        for (std::size_t i = 0; i < a.value().size(); ++i) {
          if (pg[0]) (*pg[0])[i] += g[0] * b.value()[i];
          if (pg[1]) (*pg[1])[i] += g[0] * a.value()[i];
        }
      });
}

Var MeanRows(const Var &x) {
  const Tensor &xv = x.value();
  TTA_REQUIRE(xv.rank() == 2 && xv.rows() > 0, ErrorCode::kInvalidArgument,
              "MeanRows: expected non-empty rank-2 input");
  const std::size_t rows = xv.rows(), cols = xv.cols();
  Tensor out({cols});
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c) out[c] += xv.at(r, c);
  const double inv = 1.0 / static_cast<double>(rows);
  for (double &v : out.storage()) v *= inv;
  return x.tape()->Record(
      std::move(out), {x},
      [rows, cols, inv](const Tensor &, const Tensor &g,
                        std::span<Tensor *const> pg) {
        if (!pg[0]) return;
        for (std::size_t r = 0; r < rows; ++r)
          for (std::size_t c = 0; c < cols; ++c)
            (*pg[0])[r * cols + c] += g[c] * inv;
      });
}

Var L2NormalizeRows(const Var &x, double eps) {
  const Tensor &xv = x.value();
  TTA_REQUIRE(xv.rank() == 2, ErrorCode::kInvalidArgument,
              "L2NormalizeRows: expected rank-2 input");
  const std::size_t rows = xv.rows(), cols = xv.cols();
  std::vector<double> norms(rows);
  Tensor out({rows, cols});
  for (std::size_t r = 0; r < rows; ++r) {
    double s = 0.0;
    for (std::size_t c = 0; c < cols; ++c) s += xv.at(r, c) * xv.at(r, c);
    norms[r] = std::sqrt(s + eps);
    for (std::size_t c = 0; c < cols; ++c) out.at(r, c) = xv.at(r, c) / norms[r];
  }
  return x.tape()->Record(
      std::move(out), {x},
      [x, norms = std::move(norms), rows, cols](const Tensor &, const Tensor &g,
                                                std::span<Tensor *const> pg) {
        if (!pg[0]) return;
        const Tensor &xv = x.value();
        for (std::size_t r = 0; r < rows; ++r) {
          const double n = norms[r];
          double gx = 0.0;
          for (std::size_t c = 0; c < cols; ++c)
            gx += g[r * cols + c] * xv[r * cols + c];
          for (std::size_t c = 0; c < cols; ++c)
            (*pg[0])[r * cols + c] +=
                g[r * cols + c] / n - xv[r * cols + c] * gx / (n * n * n);
        }
      });
}

Var Cosine(const Var &a, const Var &b) {
  TTA_REQUIRE(a.value().size() == b.value().size(),
              ErrorCode::kInvalidArgument, "Cosine: size mismatch");
  const Tensor &av = a.value(), &bv = b.value();
  double ab = 0.0, aa = 0.0, bb = 0.0;
  for (std::size_t i = 0; i < av.size(); ++i) {
    ab += av[i] * bv[i];
    aa += av[i] * av[i];
    bb += bv[i] * bv[i];
  }
  const double na = std::sqrt(aa), nb = std::sqrt(bb);
  const double cos = ab / (na * nb);
  return a.tape()->Record(
      Tensor::Scalar(cos), {a, b},
      [a, b, na, nb, cos](const Tensor &, const Tensor &g,
                          std::span<Tensor *const> pg) {
        const Tensor &av = a.value(), &bv = b.value();
        for (std::size_t i = 0; i < av.size(); ++i) {
          if (pg[0])
            (*pg[0])[i] +=
                g[0] * (bv[i] / (na * nb) - cos * av[i] / (na * na));
          if (pg[1])
            (*pg[1])[i] +=
                g[0] * (av[i] / (na * nb) - cos * bv[i] / (nb * nb));
        }
      });
}

Var RowCosine(const Var &a, const Var &b) {
  RequireSameShape(a, b, "RowCosine");
  const Tensor &av = a.value(), &bv = b.value();
  TTA_REQUIRE(av.rank() == 2, ErrorCode::kInvalidArgument,
              "RowCosine: expected rank-2 input");
  const std::size_t rows = av.rows(), cols = av.cols();
  std::vector<double> na(rows), nb(rows);
  Tensor out({rows});
  for (std::size_t r = 0; r < rows; ++r) {
    double ab = 0.0, aa = 0.0, bb = 0.0;
    for (std::size_t c = 0; c < cols; ++c) {
      ab += av.at(r, c) * bv.at(r, c);
      aa += av.at(r, c) * av.at(r, c);
      bb += bv.at(r, c) * bv.at(r, c);
    }
    na[r] = std::sqrt(aa);
    nb[r] = std::sqrt(bb);
    out[r] = (na[r] > 0.0 && nb[r] > 0.0) ? ab / (na[r] * nb[r]) : 0.0;
  }
  return a.tape()->Record(
      std::move(out), {a, b},
      [a, b, na = std::move(na), nb = std::move(nb), rows, cols](
          const Tensor &y, const Tensor &g, std::span<Tensor *const> pg) {
        const Tensor &av = a.value(), &bv = b.value();
        for (std::size_t r = 0; r < rows; ++r) {
          if (na[r] == 0.0 || nb[r] == 0.0) continue;
          const double inv = 1.0 / (na[r] * nb[r]);
          for (std::size_t c = 0; c < cols; ++c) {
            const std::size_t i = r * cols + c;
            if (pg[0])
              (*pg[0])[i] +=
                  g[r] * (bv[i] * inv - y[r] * av[i] / (na[r] * na[r]));
            if (pg[1])
              (*pg[1])[i] +=
                  g[r] * (av[i] * inv - y[r] * bv[i] / (nb[r] * nb[r]));
          }
        }
      });
}

Var Frame(const Var &x, std::size_t frame_len, std::size_t hop) {
  TTA_REQUIRE(frame_len >= 1 && hop >= 1, ErrorCode::kInvalidArgument,
              "Frame: non-positive frame length or hop");
  const Tensor &xv = x.value();
  const std::size_t n = xv.size();
  const std::size_t excess = n > frame_len ? n - frame_len : 0;
  const std::size_t frames = (excess + hop - 1) / hop + 1;
  Tensor out({frames, frame_len});
  for (std::size_t t = 0; t < frames; ++t)
    for (std::size_t i = 0; i < frame_len && t * hop + i < n; ++i)
      out.at(t, i) = xv[t * hop + i];
  return x.tape()->Record(
      std::move(out), {x},
      [frames, frame_len, hop, n](const Tensor &, const Tensor &g,
                                  std::span<Tensor *const> pg) {
        if (!pg[0]) return;
        for (std::size_t t = 0; t < frames; ++t)
          for (std::size_t i = 0; i < frame_len && t * hop + i < n; ++i)
            (*pg[0])[t * hop + i] += g[t * frame_len + i];
      });
}

Var MeanSquaredError(const Var &a, const Var &b) {
  RequireSameShape(a, b, "MeanSquaredError");
  const Tensor &av = a.value(), &bv = b.value();
  const std::size_t n = av.size();
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += (av[i] - bv[i]) * (av[i] - bv[i]);
  return a.tape()->Record(
      Tensor::Scalar(s / static_cast<double>(n)), {a, b},
      [a, b, n](const Tensor &, const Tensor &g, std::span<Tensor *const> pg) {
        const double c = 2.0 * g[0] / static_cast<double>(n);
        for (std::size_t i = 0; i < n; ++i) {
          const double d = a.value()[i] - b.value()[i];
          if (pg[0]) (*pg[0])[i] += c * d;
          if (pg[1]) (*pg[1])[i] -= c * d;
        }
      });
}

}  // namespace tta::ad
