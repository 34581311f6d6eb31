// tests/support/test-util.h

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

#ifndef TTA_TESTS_SUPPORT_TEST_UTIL_H_
#define TTA_TESTS_SUPPORT_TEST_UTIL_H_

// Shared helpers for the unit and acceptance tests: scratch directories,
// small random generators for property tests, and synthetic signals.

#include <unistd.h>

#include <atomic>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "tta/base/io-util.h"
#include "tta/base/tensor.h"
#include "tta/signal/waveform.h"

namespace tta::testing {

/// Fresh directory under the system temp dir, removed on destruction.
class ScratchDir {
 public:
  explicit ScratchDir(const std::string &tag = "tta") {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            (tag + "-" + std::to_string(::getpid()) + "-" +
             std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~ScratchDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  ScratchDir(const ScratchDir &) = delete;
  ScratchDir &operator=(const ScratchDir &) = delete;
  const std::filesystem::path &path() const { return path_; }
  std::filesystem::path operator/(const std::string &name) const {
    return path_ / name;
  }

 private:
  std::filesystem::path path_;
};

/// Random source for property tests.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}
  std::mt19937_64 &rng() { return rng_; }
  double Uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng_);
  }
  double Normal(double sd = 1.0) {
    return std::normal_distribution<double>(0.0, sd)(rng_);
  }
  std::size_t Size(std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_);
  }
  std::vector<double> Vector(std::size_t n, double sd = 1.0) {
    std::vector<double> v(n);
    for (auto &x : v) x = Normal(sd);
    return v;
  }
  Tensor RandomTensor(std::vector<std::size_t> shape, double sd = 1.0) {
    Tensor t(shape);
    for (auto &x : t.storage()) x = Normal(sd);
    return t;
  }
  /// Harmonic tone with a random pitch, envelope and a little noise.
  signal::Waveform Tone(std::size_t n, int rate = signal::kDefaultSampleRate) {
    signal::Waveform w;
    w.sample_rate = rate;
    w.samples.resize(n);
    const double f0 = Uniform(80.0, 300.0);
    const double amp = Uniform(0.05, 0.5);
    const double pi2 = 2.0 * std::acos(-1.0);
    const double am = Uniform(1.0, 5.0);
    for (std::size_t i = 0; i < n; ++i) {
      const double t = static_cast<double>(i) / rate;
      double s = 0.0;
      for (int k = 1; k <= 4; ++k) s += std::sin(pi2 * f0 * k * t) / k;
      w.samples[i] = amp * (0.6 + 0.4 * std::sin(pi2 * am * t)) * s +
                     Normal(0.01 * amp);
    }
    return w;
  }
  signal::Waveform Noise(std::size_t n, double sd = 0.1) {
    signal::Waveform w;
    w.samples = Vector(n, sd);
    return w;
  }

 private:
  std::mt19937_64 rng_;
};

/// Runs `body` for `cases` independently seeded generators.
inline void ForAll(int cases, const std::function<void(Gen &)> &body,
                   std::uint64_t base_seed = 1000) {
  for (int c = 0; c < cases; ++c) {
    Gen g(base_seed + static_cast<std::uint64_t>(c));
    body(g);
  }
}

inline double RelativeError(double a, double b, double floor = 1e-12) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), floor});
}

}  // namespace tta::testing

#endif  // TTA_TESTS_SUPPORT_TEST_UTIL_H_
