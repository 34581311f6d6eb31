// bench/kernels-bench.cc

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

// Serial versus OpenMP kernels.  Run with OMP_NUM_THREADS set to the number
// of cores to compare; the "flops" counter is per second.
//
//   kernels-bench --benchmark_filter=Gemm

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "tta/kernels/kernels.h"

namespace {

using tta::kernels::Conv2dShape;

std::vector<double> RandomVector(std::size_t n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d(0.0, 1.0);
  std::vector<double> v(n);
  for (double &x : v) x = d(rng);
  return v;
}

template <bool kParallel>
void BM_Gemm(benchmark::State &state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = RandomVector(n * n, 1), b = RandomVector(n * n, 2);
  std::vector<double> c(n * n);
  for (auto _ : state) {
    if constexpr (kParallel)
      tta::kernels::parallel::Gemm(false, false, n, n, n, a.data(), b.data(), c.data());
    else
      tta::kernels::serial::Gemm(false, false, n, n, n, a.data(), b.data(), c.data());
    benchmark::DoNotOptimize(c.data());
    benchmark::ClobberMemory();
  }
  state.counters["flops"] = benchmark::Counter(
      2.0 * n * n * n, benchmark::Counter::kIsIterationInvariantRate);
  state.counters["threads"] = kParallel ? tta::kernels::MaxThreads() : 1;
}

// The model's convolution: a few channels over (frames x hidden).
Conv2dShape ConvShape(std::size_t frames) {
  Conv2dShape s;
  s.in_channels = 8;
  s.out_channels = 8;
  s.height = frames;
  s.width = 256;
  s.kernel = 3;
  s.dilation = 2;
  return s;
}

template <bool kParallel>
void BM_Conv2dForward(benchmark::State &state) {
  const Conv2dShape s = ConvShape(static_cast<std::size_t>(state.range(0)));
  const std::size_t plane = s.height * s.width;
  const auto in = RandomVector(s.in_channels * plane, 3);
  const auto w = RandomVector(s.out_channels * s.in_channels * s.kernel * s.kernel, 4);
  const auto bias = RandomVector(s.out_channels, 5);
  std::vector<double> out(s.out_channels * plane);
  for (auto _ : state) {
    if constexpr (kParallel)
      tta::kernels::parallel::Conv2dForward(s, in.data(), w.data(), bias.data(), out.data());
    else
      tta::kernels::serial::Conv2dForward(s, in.data(), w.data(), bias.data(), out.data());
    benchmark::DoNotOptimize(out.data());
  }
  state.counters["flops"] = benchmark::Counter(
      2.0 * s.out_channels * s.in_channels * s.kernel * s.kernel * plane,
      benchmark::Counter::kIsIterationInvariantRate);
}

template <bool kParallel>
void BM_Conv2dBackward(benchmark::State &state) {
  const Conv2dShape s = ConvShape(static_cast<std::size_t>(state.range(0)));
  const std::size_t plane = s.height * s.width;
  const std::size_t wsize = s.out_channels * s.in_channels * s.kernel * s.kernel;
  const auto in = RandomVector(s.in_channels * plane, 6);
  const auto w = RandomVector(wsize, 7);
  const auto grad_out = RandomVector(s.out_channels * plane, 8);
  std::vector<double> gi(in.size()), gw(wsize), gb(s.out_channels);
  for (auto _ : state) {
    if constexpr (kParallel)
      tta::kernels::parallel::Conv2dBackward(s, in.data(), w.data(), grad_out.data(),
                                             gi.data(), gw.data(), gb.data());
    else
      tta::kernels::serial::Conv2dBackward(s, in.data(), w.data(), grad_out.data(),
                                           gi.data(), gw.data(), gb.data());
    benchmark::DoNotOptimize(gi.data());
    benchmark::DoNotOptimize(gw.data());
  }
  state.counters["flops"] = benchmark::Counter(
      4.0 * s.out_channels * s.in_channels * s.kernel * s.kernel * plane,
      benchmark::Counter::kIsIterationInvariantRate);
}

BENCHMARK(BM_Gemm<false>)->Name("Gemm/serial")->RangeMultiplier(2)->Range(64, 512);
BENCHMARK(BM_Gemm<true>)->Name("Gemm/parallel")->RangeMultiplier(2)->Range(64, 512);
BENCHMARK(BM_Conv2dForward<false>)->Name("Conv2dForward/serial")->Arg(64)->Arg(188);
BENCHMARK(BM_Conv2dForward<true>)->Name("Conv2dForward/parallel")->Arg(64)->Arg(188);
BENCHMARK(BM_Conv2dBackward<false>)->Name("Conv2dBackward/serial")->Arg(64)->Arg(188);
BENCHMARK(BM_Conv2dBackward<true>)->Name("Conv2dBackward/parallel")->Arg(64)->Arg(188);

}  // namespace

BENCHMARK_MAIN();
