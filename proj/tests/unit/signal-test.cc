// tests/unit/signal-test.cc

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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "support/grad-check.h"
#include "tta/autodiff/ops.h"
#include "tta/base/error.h"
#include "tta/metrics/metrics.h"
#include "tta/signal/envelope.h"
#include "tta/signal/fft.h"
#include "tta/signal/resample.h"
#include "tta/signal/signal-ops.h"
#include "tta/signal/spectral-subtraction.h"
#include "tta/signal/stft.h"
#include "tta/signal/wav-io.h"

namespace tta::signal {
namespace {

using testing::ForAll;
using testing::Gen;
constexpr double kPi = std::numbers::pi;

Waveform Sine(double freq, double amp, std::size_t n, int rate = 16000) {
  Waveform w;
  w.sample_rate = rate;
  w.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    w.samples[i] = amp * std::sin(2 * kPi * freq * i / rate);
  return w;
}

double InteriorRelError(const std::vector<double> &a,
                        const std::vector<double> &b, std::size_t margin) {
  double num = 0, den = 0;
  for (std::size_t i = margin; i + margin < a.size(); ++i) {
    num += (a[i] - b[i]) * (a[i] - b[i]);
    den += a[i] * a[i];
  }
  return std::sqrt(num / den);
}

TEST(Fft, RoundTripAndParseval) {
  ForAll(10, [](Gen &g) {
    const std::size_t n = g.Size(1, 300);
    const auto x = g.Vector(n);
    const auto bins = Rfft(x);
    ASSERT_EQ(bins.size(), n / 2 + 1);
    const auto y = Irfft(bins, n);
    for (std::size_t i = 0; i < n; ++i) ASSERT_NEAR(x[i], y[i], 1e-12);
    std::vector<Complex> cx(x.begin(), x.end());
    const auto full = Fft(cx, false);
    double e_time = 0, e_freq = 0;
    for (double v : x) e_time += v * v;
    for (const auto &c : full) e_freq += std::norm(c);
    EXPECT_NEAR(e_time, e_freq / n, 1e-9 * e_time);
  });
}

TEST(Stft, ZeroSignalGivesZeroMagnitudes) {
  Waveform w;
  w.samples.assign(16000, 0.0);
  const Spectrogram s = Stft(w, 512, 256);
  EXPECT_EQ(s.num_bins(), 257u);
  for (double m : s.magnitudes.storage()) EXPECT_EQ(m, 0.0);
}

TEST(Stft, BinCenteredSinusoidIsSingleBin) {
  // 32 * 16000 / 512 = 1000 Hz lies exactly on bin 32.
  const Waveform w = Sine(1000.0, 0.5, 16000);
  const Spectrogram rect = Stft(w, 512, 256, WindowType::kRectangular);
  const Spectrogram hann = Stft(w, 512, 256, WindowType::kHann);
  for (std::size_t t = 0; t + 1 < rect.num_frames(); ++t) {
    double total = 0, lobe = 0, rect_total = 0;
    for (std::size_t f = 0; f < 257; ++f) {
      rect_total += std::pow(rect.magnitudes.at(t, f), 2);
      total += std::pow(hann.magnitudes.at(t, f), 2);
      if (f >= 31 && f <= 33) lobe += std::pow(hann.magnitudes.at(t, f), 2);
    }
    EXPECT_GE(std::pow(rect.magnitudes.at(t, 32), 2) / rect_total, 0.99);
    // The Hann main lobe spans the centre bin and its two neighbours.
    EXPECT_GE(lobe / total, 0.99);
    std::size_t argmax = 0;
    for (std::size_t f = 1; f < 257; ++f)
      if (hann.magnitudes.at(t, f) > hann.magnitudes.at(t, argmax)) argmax = f;
    EXPECT_EQ(argmax, 32u);
  }
}

TEST(Stft, WhiteNoiseRoundTrip) {
  Gen g(5);
  Waveform w = g.Noise(16000, 0.3);
  const Spectrogram s = Stft(w, 512, 256);
  const Waveform r = Istft(s);
  EXPECT_EQ(r.size(), (s.num_frames() - 1) * 256 + 512);
  EXPECT_LT(InteriorRelError(w.samples, r.samples, 512), 1e-6);
}

TEST(Stft, RoundTripProperty) {
  ForAll(10, [](Gen &g) {
    const std::size_t frame = std::size_t{1} << g.Size(6, 9);
    const std::size_t hop = frame / (std::size_t{1} << g.Size(1, 2));
    Waveform w = g.Tone(g.Size(4 * frame, 8 * frame));
    const Waveform r = Istft(Stft(w, frame, hop));
    EXPECT_LT(InteriorRelError(w.samples, r.samples, frame), 1e-6);
  });
}

TEST(Stft, CenteredRoundTripCoversEverySample) {
  ForAll(5, [](Gen &g) {
    StftConfig cfg;
    Waveform w = g.Tone(g.Size(600, 5000));
    const Waveform r = CenteredIstft(CenteredStft(w, cfg), w.size());
    ASSERT_EQ(r.size(), w.size());
    for (std::size_t i = 0; i < w.size(); ++i)
      ASSERT_NEAR(r.samples[i], w.samples[i], 1e-9);
  });
}

TEST(Stft, PhasesInRangeAndMagnitudesNonNegative) {
  Gen g(1);
  const Spectrogram s = Stft(g.Tone(4000), 512, 256);
  for (double m : s.magnitudes.storage()) EXPECT_GE(m, 0.0);
  for (double p : s.phases.storage()) {
    EXPECT_GT(p, -kPi - 1e-12);
    EXPECT_LE(p, kPi + 1e-12);
  }
}

TEST(Stft, RejectsBadArguments) {
  Gen g(1);
  Waveform w = g.Tone(2000);
  EXPECT_THROW(Stft(w, 500, 250), Error);
  EXPECT_THROW(Stft(w, 512, 300), Error);
  EXPECT_THROW(Stft(w, 0, 256), Error);
  w.samples[10] = std::nan("");
  try {
    Stft(w, 512, 256);
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidSignal);
  }
}

TEST(Istft, SilenceGivesSilence) {
  Spectrogram s;
  s.magnitudes = Tensor({4, 257}, 0.0);
  s.phases = Tensor({4, 257}, 0.0);
  s.frame_len = 512;
  s.hop = 256;
  for (double v : Istft(s).samples) EXPECT_EQ(v, 0.0);
}

TEST(Istft, SingleFlatFrameIsAnImpulse) {
  // A flat unit magnitude spectrum is the DFT of a unit impulse.  With zero
  // phase the impulse sits at n = 0, under the rectangular window; with
  // alternating phase (-1)^k it moves to n = N/2, where the Hann window
  // peaks, and window normalization returns exactly the impulse.
  for (WindowType win : {WindowType::kRectangular, WindowType::kHann}) {
    const bool hann = win == WindowType::kHann;
    Spectrogram s;
    s.magnitudes = Tensor({1, 257}, 1.0);
    s.phases = Tensor({1, 257}, 0.0);
    if (hann)
      for (std::size_t k = 1; k < 257; k += 2) s.phases[k] = kPi;
    s.frame_len = 512;
    s.hop = 256;
    s.window = win;
    const Waveform r = Istft(s);
    ASSERT_EQ(r.size(), 512u);
    const std::size_t at = hann ? 256 : 0;
    for (std::size_t i = 0; i < 512; ++i)
      EXPECT_NEAR(r.samples[i], i == at ? 1.0 : 0.0, 1e-10) << i;
  }
}

TEST(Istft, InconsistentDimensionsRejected) {
  Spectrogram s;
  s.magnitudes = Tensor({2, 100}, 1.0);
  s.phases = Tensor({2, 100}, 0.0);
  s.frame_len = 512;
  s.hop = 256;
  EXPECT_THROW(Istft(s), Error);
}

TEST(FrameSignal, CountsAndPadding) {
  Waveform w;
  w.samples.assign(1000, 1.0);
  EXPECT_EQ(FrameSignal(w, 512, 256).frames.size(), 3u);
  EXPECT_EQ(NumFrames(1000, 512, 256), 3u);
  w.samples.assign(512, 1.0);
  EXPECT_EQ(FrameSignal(w, 512, 256).frames.size(), 1u);
  w.samples.assign(100, 1.0);
  const FrameSet one = FrameSignal(w, 512, 256);
  ASSERT_EQ(one.frames.size(), 1u);
  EXPECT_EQ(one.frames[0][99], 1.0);
  EXPECT_EQ(one.frames[0][100], 0.0);
}

TEST(FrameSignal, NonOverlappingFramesPartitionTheSignal) {
  ForAll(10, [](Gen &g) {
    const std::size_t frame = g.Size(1, 64);
    Waveform w = g.Noise(g.Size(1, 500));
    const FrameSet fs = FrameSignal(w, frame, frame);
    std::vector<double> cat;
    for (const auto &f : fs.frames) {
      ASSERT_EQ(f.size(), frame);
      cat.insert(cat.end(), f.begin(), f.end());
    }
    ASSERT_GE(cat.size(), w.size());
    ASSERT_LT(cat.size() - w.size(), frame);
    for (std::size_t i = 0; i < cat.size(); ++i)
      ASSERT_EQ(cat[i], i < w.size() ? w.samples[i] : 0.0);
  });
}

TEST(Hilbert, SinusoidEnvelopeIsItsAmplitude) {
  const Waveform w = Sine(200.0, 0.7, 16000);
  const Waveform e = HilbertEnvelope(w);
  ASSERT_EQ(e.size(), w.size());
  const std::size_t margin = 80;  // 5 ms
  double worst = 0;
  for (std::size_t i = margin; i + margin < e.size(); ++i)
    worst = std::max(worst, std::abs(e.samples[i] - 0.7) / 0.7);
  EXPECT_LT(worst, 0.02);
}

TEST(Hilbert, ZeroAndEmpty) {
  Waveform z;
  z.samples.assign(100, 0.0);
  for (double v : HilbertEnvelope(z).samples) EXPECT_EQ(v, 0.0);
  Waveform empty;
  EXPECT_THROW(HilbertEnvelope(empty), Error);
}

TEST(Hilbert, DominatesAndScalesExactly) {
  ForAll(10, [](Gen &g) {
    Waveform w = g.Tone(g.Size(64, 4000));
    const Waveform e = HilbertEnvelope(w);
    const double c = g.Uniform(0.1, 10.0);
    const Waveform ec = HilbertEnvelope(Scaled(w, c));
    for (std::size_t i = 0; i < w.size(); ++i) {
      ASSERT_GE(e.samples[i], std::abs(w.samples[i]) - 1e-9);
      ASSERT_NEAR(ec.samples[i], c * e.samples[i],
                  1e-12 * std::max(1.0, c * e.samples[i]));
    }
  });
}

TEST(SpectralSubtraction, CleanToneWithSilencePassesThrough) {
  Waveform x = Sine(440.0, 0.5, 16000);
  for (std::size_t i = 0; i < x.size(); ++i)
    if (i < 4000 || i >= 12000) x.samples[i] = 0.0;
  const Waveform y = SpectralSubtraction(x);
  ASSERT_EQ(y.size(), x.size());
  EXPECT_NEAR(metrics::SiSdr(x, y), metrics::SiSdr(x, x), 1.0);
}

TEST(SpectralSubtraction, StationaryNoiseIsAttenuated) {
  // Subtracting a mean magnitude leaves the Rayleigh tail above it, about
  // 13% of the energy even for an exact estimate, so the bound is 6 dB.
  Gen g(2);
  const Waveform n = g.Noise(16000, 0.1);
  const Waveform y = SpectralSubtraction(n);
  EXPECT_LE(y.Energy(), 0.25 * n.Energy());
}

TEST(SpectralSubtraction, ImprovesNoisyTone) {
  Gen g(3);
  Waveform clean = Sine(440.0, 0.5, 16000);
  for (std::size_t i = 0; i < clean.size(); ++i)
    if (i < 3000 || i >= 13000) clean.samples[i] = 0.0;
  Waveform noise = g.Noise(16000, 1.0);
  const double scale = std::sqrt(clean.Energy() / noise.Energy());
  Waveform y = clean;
  for (std::size_t i = 0; i < y.size(); ++i) y.samples[i] += scale * noise.samples[i];
  const Waveform out = SpectralSubtraction(y);
  EXPECT_GT(metrics::SiSdr(clean, out), metrics::SiSdr(clean, y));
}

TEST(SpectralSubtraction, EnergyBoundDeterminismAndErrors) {
  ForAll(5, [](Gen &g) {
    Waveform y = g.Tone(g.Size(600, 8000));
    for (auto &v : y.samples) v += g.Normal(0.05);
    const Waveform a = SpectralSubtraction(y), b = SpectralSubtraction(y);
    EXPECT_EQ(a.samples, b.samples);
    EXPECT_EQ(a.size(), y.size());
    EXPECT_LE(a.Energy(), y.Energy() + 1e-9);
  });
  Waveform short_y;
  short_y.samples.assign(100, 0.1);
  EXPECT_THROW(SpectralSubtraction(short_y), Error);
}

TEST(WavIo, RoundTrip) {
  testing::ScratchDir dir;
  Gen g(4);
  Waveform w = g.Tone(1234);
  WriteWav(dir / "f.wav", w);
  EXPECT_EQ(ReadWav(dir / "f.wav").samples.size(), w.size());
  const Waveform f = ReadWav(dir / "f.wav");
  for (std::size_t i = 0; i < w.size(); ++i)
    EXPECT_NEAR(f.samples[i], w.samples[i], 1e-7);
  WriteWav(dir / "p.wav", w, WavEncoding::kPcm16);
  const Waveform p = ReadWav(dir / "p.wav");
  for (std::size_t i = 0; i < w.size(); ++i)
    EXPECT_NEAR(p.samples[i], w.samples[i], 1.0 / 32768 + 1e-12);
}

TEST(WavIo, ResamplesOnIngestAndRejectsGarbage) {
  testing::ScratchDir dir;
  WriteWav(dir / "8k.wav", Sine(300.0, 0.5, 8000, 8000));
  const Waveform up = ReadWav(dir / "8k.wav");
  EXPECT_EQ(up.sample_rate, 16000);
  EXPECT_EQ(up.size(), 16000u);
  WriteTextFile(dir / "bad.wav", "not a wave file at all");
  EXPECT_THROW(ReadWav(dir / "bad.wav"), Error);
  EXPECT_THROW(ReadWav(dir / "missing.wav"), Error);
}

TEST(Resample, PreservesInBandTone) {
  const Waveform w = Sine(300.0, 0.5, 8000, 8000);
  const Waveform up = Resample(w, 16000);
  ASSERT_EQ(up.size(), 16000u);
  const Waveform ref = Sine(300.0, 0.5, 16000);
  EXPECT_LT(InteriorRelError(ref.samples, up.samples, 400), 1e-2);
  const Waveform down = Resample(up, 8000);
  EXPECT_LT(InteriorRelError(w.samples, down.samples, 200), 1e-2);
}

TEST(SignalOps, UnitMaskReproducesIstft) {
  Gen g(6);
  const Waveform w = g.Tone(3000);
  const Spectrogram s = Stft(w, 512, 256);
  ad::Tape tape(false);
  ad::Var out = MaskedIstft(tape.Constant(Tensor(s.magnitudes.shape(), 1.0)), s);
  const Waveform ref = Istft(s);
  ASSERT_EQ(out.value().size(), ref.size());
  for (std::size_t i = 0; i < ref.size(); ++i)
    ASSERT_NEAR(out.value()[i], ref.samples[i], 1e-12);
}

TEST(SignalOps, MaskedIstftGradient) {
  // Linear in the mask, so a wide difference step is exact.
  Gen g(7);
  const Spectrogram s = Stft(g.Tone(700), 256, 128);
  auto f = [&](ad::Tape &t, const std::vector<ad::Var> &v) {
    ad::Var y = MaskedIstft(v[0], s);
    return ad::Dot(y, t.Constant(Tensor::Vector(Gen(8).Vector(y.value().size()))));
  };
  const auto r = testing::CheckGradients(
      f, {Gen(9).RandomTensor(s.magnitudes.shape())}, 0.5, 200);
  EXPECT_LT(r.max_rel_error, 1e-6);
}

TEST(SignalOps, EnvelopeMatchesAndDifferentiates) {
  Gen g(10);
  const Waveform w = g.Tone(301);
  ad::Tape tape(false);
  ad::Var e = HilbertEnvelope(tape.Constant(Tensor::Vector(w.samples)));
  const Waveform ref = HilbertEnvelope(w);
  for (std::size_t i = 0; i < w.size(); ++i)
    ASSERT_NEAR(e.value()[i], ref.samples[i], 1e-12);
  auto f = [](ad::Tape &t, const std::vector<ad::Var> &v) {
    ad::Var env = HilbertEnvelope(v[0]);
    return ad::Dot(env, t.Constant(Tensor::Vector(Gen(11).Vector(env.value().size()))));
  };
  const auto r = testing::CheckGradients(f, {Tensor::Vector(w.samples)}, 1e-6, 100);
  EXPECT_LT(r.max_rel_error, 1e-5);
}

}  // namespace
}  // namespace tta::signal
