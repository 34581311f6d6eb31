// src/signal/fft.cc

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

#include "tta/signal/fft.h"

#include <fftw3.h>

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>

#include "tta/base/error.h"

namespace tta::signal {
namespace {

enum class Kind { kR2C, kC2R, kForward, kBackward };

struct FftwFree {
  void operator()(void *p) const { fftw_free(p); }
};
template <typename T>
using AlignedBuffer = std::unique_ptr<T[], FftwFree>;

template <typename T>
AlignedBuffer<T> Allocate(std::size_t n) {
  return AlignedBuffer<T>(static_cast<T *>(fftw_malloc(sizeof(T) * n)));
}

class PlanCache {
 public:
  static PlanCache &Get() {
    static PlanCache cache;
    return cache;
  }

  fftw_plan Plan(Kind kind, std::size_t n) {
    std::lock_guard<std::mutex> lock(mu_);
    auto key = std::make_pair(kind, n);
    auto it = plans_.find(key);
    if (it != plans_.end()) return it->second;
    const int len = static_cast<int>(n);
    // Planning may scribble on the buffers; they are scratch only.
    auto rbuf = Allocate<double>(n + 2);
    auto cbuf = Allocate<fftw_complex>(n + 1);
    auto cbuf2 = Allocate<fftw_complex>(n + 1);
    fftw_plan p = nullptr;
    switch (kind) {
      case Kind::kR2C:
        p = fftw_plan_dft_r2c_1d(len, rbuf.get(), cbuf.get(), FFTW_ESTIMATE);
        break;
      case Kind::kC2R:
        p = fftw_plan_dft_c2r_1d(len, cbuf.get(), rbuf.get(), FFTW_ESTIMATE);
        break;
      case Kind::kForward:
        p = fftw_plan_dft_1d(len, cbuf.get(), cbuf2.get(), FFTW_FORWARD,
                             FFTW_ESTIMATE);
        break;
      case Kind::kBackward:
        p = fftw_plan_dft_1d(len, cbuf.get(), cbuf2.get(), FFTW_BACKWARD,
                             FFTW_ESTIMATE);
        break;
    }
    TTA_REQUIRE(p != nullptr, ErrorCode::kInvalidArgument,
                "FFTW failed to create a plan");
    plans_.emplace(key, p);
    return p;
  }

  ~PlanCache() {
    for (auto &kv : plans_) fftw_destroy_plan(kv.second);
  }

 private:
  std::mutex mu_;
  std::map<std::pair<Kind, std::size_t>, fftw_plan> plans_;
};

}  // namespace

std::vector<Complex> Rfft(std::span<const double> x) {
  const std::size_t n = x.size();
  TTA_REQUIRE(n >= 1, ErrorCode::kInvalidArgument, "Rfft: empty input");
  fftw_plan plan = PlanCache::Get().Plan(Kind::kR2C, n);
  auto in = Allocate<double>(n);
  auto out = Allocate<fftw_complex>(n / 2 + 1);
  std::copy(x.begin(), x.end(), in.get());
  fftw_execute_dft_r2c(plan, in.get(), out.get());
  std::vector<Complex> bins(n / 2 + 1);
  for (std::size_t k = 0; k < bins.size(); ++k)
    bins[k] = Complex(out[k][0], out[k][1]);
  return bins;
}

std::vector<double> Irfft(std::span<const Complex> bins, std::size_t n) {
  TTA_REQUIRE(n >= 1 && bins.size() == n / 2 + 1, ErrorCode::kInvalidArgument,
              "Irfft: bin count does not match length");
  fftw_plan plan = PlanCache::Get().Plan(Kind::kC2R, n);
  auto in = Allocate<fftw_complex>(n / 2 + 1);
  auto out = Allocate<double>(n);
  for (std::size_t k = 0; k < bins.size(); ++k) {
    in[k][0] = bins[k].real();
    in[k][1] = bins[k].imag();
  }
  fftw_execute_dft_c2r(plan, in.get(), out.get());
  std::vector<double> x(n);
  const double inv = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = out[i] * inv;
  return x;
}

std::vector<Complex> Fft(std::span<const Complex> x, bool inverse) {
  const std::size_t n = x.size();
  TTA_REQUIRE(n >= 1, ErrorCode::kInvalidArgument, "Fft: empty input");
  fftw_plan plan =
      PlanCache::Get().Plan(inverse ? Kind::kBackward : Kind::kForward, n);
  auto in = Allocate<fftw_complex>(n);
  auto out = Allocate<fftw_complex>(n);
  for (std::size_t i = 0; i < n; ++i) {
    in[i][0] = x[i].real();
    in[i][1] = x[i].imag();
  }
  fftw_execute_dft(plan, in.get(), out.get());
  std::vector<Complex> y(n);
  const double s = inverse ? 1.0 / static_cast<double>(n) : 1.0;
  for (std::size_t i = 0; i < n; ++i) y[i] = Complex(out[i][0] * s, out[i][1] * s);
  return y;
}

}  // namespace tta::signal
