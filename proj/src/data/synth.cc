// src/data/synth.cc

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

#include "tta/data/synth.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "tta/base/error.h"
#include "tta/signal/wav-io.h"

namespace tta::data {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kMaxHarmonicHz = 3900.0;

double Uniform(std::mt19937_64 &rng, double lo, double hi) {
  return lo + (hi - lo) * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

void NormalizeRms(signal::Waveform *w, double rms) {
  const double p = w->Power();
  if (p <= 0.0) return;
  const double g = rms / std::sqrt(p);
  for (double &v : w->samples) v *= g;
}

struct Formant {
  double start, end, bandwidth, gain;
};

// One voiced syllable added at `begin`.
void AddSyllable(std::mt19937_64 &rng, const SpeechStyle &style, double f0,
                 std::size_t begin, std::size_t len, int rate,
                 std::vector<double> *out) {
  const double fs = style.formant_scale;
  std::array<Formant, 3> formants = {
      Formant{Uniform(rng, 300, 800) * fs, Uniform(rng, 300, 800) * fs, 90, 1.0},
      Formant{Uniform(rng, 900, 2300) * fs, Uniform(rng, 900, 2300) * fs, 130,
              0.6},
      Formant{Uniform(rng, 2300, 3200) * fs, Uniform(rng, 2300, 3200) * fs,
              180, 0.3}};
  const double glide = Uniform(rng, -style.glide_depth, style.glide_depth);
  const double vibrato_hz = Uniform(rng, 4.0, 6.0);
  const std::size_t max_h = 64;
  std::vector<double> amp(max_h + 1, 0.0);
  double phase = Uniform(rng, 0.0, kTwoPi);
  const std::size_t block = 64;
  for (std::size_t i = 0; i < len && begin + i < out->size(); ++i) {
    const double tau = static_cast<double>(i) / static_cast<double>(len);
    const double t = static_cast<double>(i) / rate;
    const double pitch =
        f0 * (1.0 + glide * tau + 0.02 * std::sin(kTwoPi * vibrato_hz * t));
    if (i % block == 0) {
      for (std::size_t k = 1; k <= max_h; ++k) {
        const double fk = static_cast<double>(k) * pitch;
        if (fk > kMaxHarmonicHz) {
          amp[k] = 0.0;
          continue;
        }
        double a = 0.02;
        for (const Formant &f : formants) {
          const double fc = f.start + (f.end - f.start) * tau;
          const double z = (fk - fc) / f.bandwidth;
          a += f.gain * std::exp(-0.5 * z * z);
        }
        amp[k] = a / std::sqrt(static_cast<double>(k));
      }
    }
    phase += kTwoPi * pitch / rate;
    if (phase > kTwoPi) phase -= kTwoPi;
    // sin(k phase) by the Chebyshev recurrence.
    const double c2 = 2.0 * std::cos(phase);
    double s_prev = 0.0, s_cur = std::sin(phase), acc = 0.0;
    for (std::size_t k = 1; k <= max_h; ++k) {
      acc += amp[k] * s_cur;
      const double s_next = c2 * s_cur - s_prev;
      s_prev = s_cur;
      s_cur = s_next;
    }
    const double env = std::pow(std::sin(std::numbers::pi * tau), 0.6);
    (*out)[begin + i] += env * acc;
  }
}

// Short high-passed noise burst (fricative onset).
void AddFricative(std::mt19937_64 &rng, std::size_t begin, std::size_t len,
                  double level, std::vector<double> *out) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  double prev = 0.0;
  for (std::size_t i = 0; i < len && begin + i < out->size(); ++i) {
    const double x = gauss(rng);
    const double hp = x - prev;
    prev = x;
    const double tau = static_cast<double>(i) / static_cast<double>(len);
    (*out)[begin + i] += level * std::sin(std::numbers::pi * tau) * hp;
  }
}

}  // namespace

const char *ProfileName(Profile p) {
  switch (p) {
    case Profile::kSource: return "source";
    case Profile::kShiftedSpeaker: return "shifted_speaker";
    case Profile::kShiftedNoise: return "shifted_noise";
    case Profile::kShiftedLanguage: return "shifted_language";
  }
  return "?";
}

Profile ParseProfile(const std::string &s) {
  for (Profile p : {Profile::kSource, Profile::kShiftedSpeaker,
                    Profile::kShiftedNoise, Profile::kShiftedLanguage})
    if (s == ProfileName(p)) return p;
  throw Error(ErrorCode::kInvalidArgument, "unknown profile '" + s + "'");
}

SpeechStyle SpeechStyleFor(Profile p) {
  SpeechStyle s;
  if (p == Profile::kShiftedSpeaker) {
    s.f0_lo = 180.0;
    s.f0_hi = 290.0;
    s.formant_scale = 1.15;
    s.glide_depth = 0.25;
  } else if (p == Profile::kShiftedLanguage) {
    s.syllable_lo = 0.08;
    s.syllable_hi = 0.20;
    s.pause_lo = 0.02;
    s.pause_hi = 0.08;
    s.glide_depth = 0.3;
    s.fricative_prob = 0.35;
  }
  return s;
}

NoiseStyle NoiseStyleFor(Profile p) {
  NoiseStyle n;
  if (p == Profile::kShiftedNoise) n.kind = NoiseKind::kBabbleClatter;
  return n;
}

signal::Waveform SynthSpeech(std::mt19937_64 &rng, const SpeechStyle &style,
                             double seconds, int rate) {
  TTA_REQUIRE(seconds > 0.0 && rate > 0, ErrorCode::kInvalidArgument,
              "invalid synthesis duration or rate");
  signal::Waveform w;
  w.sample_rate = rate;
  w.samples.assign(static_cast<std::size_t>(seconds * rate), 0.0);
  const double f0 = Uniform(rng, style.f0_lo, style.f0_hi);
  std::size_t pos = static_cast<std::size_t>(Uniform(rng, 0.02, 0.15) * rate);
  while (pos < w.size()) {
    const std::size_t len = static_cast<std::size_t>(
        Uniform(rng, style.syllable_lo, style.syllable_hi) * rate);
    if (Uniform(rng, 0.0, 1.0) < style.fricative_prob) {
      const std::size_t flen =
          static_cast<std::size_t>(Uniform(rng, 0.03, 0.07) * rate);
      AddFricative(rng, pos, flen, 0.05, &w.samples);
      pos += flen / 2;
    }
    AddSyllable(rng, style, f0 * Uniform(rng, 0.9, 1.1), pos, len, rate,
                &w.samples);
    pos += len + static_cast<std::size_t>(
                     Uniform(rng, style.pause_lo, style.pause_hi) * rate);
  }
  NormalizeRms(&w, Uniform(rng, 0.03, 0.1));
  return w;
}

namespace {

// Sum of independent synthetic talkers at random gains, RMS 0.05.
signal::Waveform Babble(std::mt19937_64 &rng, const SpeechStyle &style,
                        int talkers, double seconds, int rate) {
  signal::Waveform w;
  w.sample_rate = rate;
  w.samples.assign(static_cast<std::size_t>(seconds * rate), 0.0);
  for (int k = 0; k < talkers; ++k) {
    signal::Waveform s = SynthSpeech(rng, style, seconds, rate);
    const double g = Uniform(rng, 0.5, 1.0);
    for (std::size_t i = 0; i < w.size(); ++i) w.samples[i] += g * s.samples[i];
  }
  NormalizeRms(&w, 0.05);
  return w;
}

}  // namespace

signal::Waveform SynthNoise(std::mt19937_64 &rng, const NoiseStyle &style,
                            double seconds, int rate) {
  TTA_REQUIRE(seconds > 0.0 && rate > 0, ErrorCode::kInvalidArgument,
              "invalid synthesis duration or rate");
  signal::Waveform w;
  w.sample_rate = rate;
  const std::size_t n = static_cast<std::size_t>(seconds * rate);
  w.samples.assign(n, 0.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  if (style.kind == NoiseKind::kColoredHum) {
    // AR(1) low-passed noise, slow amplitude drift, mains-like hum.
    const double a = Uniform(rng, 0.6, 0.95);
    const double drift_hz = Uniform(rng, 0.2, 1.0);
    const double hum_f = Uniform(rng, 0.0, 1.0) < 0.5 ? 100.0 : 120.0;
    const double hum_level = Uniform(rng, 0.0, 0.5);
    double y = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double t = static_cast<double>(i) / rate;
      y = a * y + (1.0 - a) * gauss(rng) * 3.0;
      double hum = 0.0;
      for (int k = 1; k <= 3; ++k)
        hum += std::sin(kTwoPi * hum_f * k * t) / k;
      w.samples[i] =
          y * (1.0 + 0.3 * std::sin(kTwoPi * drift_hz * t)) + hum_level * 0.1 * hum;
    }
  } else {
    // Babble from several talkers plus a resonant band of clatter bursts.
    SpeechStyle babble;
    babble.f0_lo = 100.0;
    babble.f0_hi = 250.0;
    w = Babble(rng, babble, std::uniform_int_distribution<int>(3, 6)(rng),
               seconds, rate);
    const double fc = Uniform(rng, 1500.0, 3500.0);
    const double r = 0.97;
    const double c1 = 2.0 * r * std::cos(kTwoPi * fc / rate), c2 = -r * r;
    double y1 = 0.0, y2 = 0.0, burst = 0.0;
    const double burst_rate = Uniform(rng, 2.0, 6.0) / rate;
    for (std::size_t i = 0; i < n; ++i) {
      if (Uniform(rng, 0.0, 1.0) < burst_rate) burst = 1.0;
      burst *= 0.9995;
      const double x = gauss(rng) * (0.2 + burst);
      const double y = c1 * y1 + c2 * y2 + x * (1.0 - r);
      y2 = y1;
      y1 = y;
      w.samples[i] += 0.6 * y;
    }
  }
  NormalizeRms(&w, 0.05);
  return w;
}

std::mt19937_64 ItemRng(std::uint64_t seed, std::uint64_t stream,
                        std::uint64_t index) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream),
                    static_cast<std::uint32_t>(index),
                    static_cast<std::uint32_t>(index >> 32)};
  return std::mt19937_64(seq);
}

SynthCorpus GenerateCorpus(const SynthOptions &opts) {
  TTA_REQUIRE(opts.n_utts >= 1, ErrorCode::kInvalidArgument,
              "corpus needs at least one utterance");
  TTA_REQUIRE(opts.min_seconds > 0.0 && opts.max_seconds >= opts.min_seconds,
              ErrorCode::kInvalidArgument, "invalid duration range");
  SynthCorpus c{opts.out_dir / "clean", opts.out_dir / "noise"};
  std::filesystem::create_directories(c.clean_dir);
  std::filesystem::create_directories(c.noise_dir);
  const SpeechStyle speech = SpeechStyleFor(opts.profile);
  const NoiseStyle noise =
      NoiseStyleFor(opts.noise_profile.value_or(opts.profile));
  char name[64];
  for (std::size_t i = 0; i < opts.n_utts; ++i) {
    std::mt19937_64 rng = ItemRng(opts.seed, 1, i);
    const double secs = Uniform(rng, opts.min_seconds, opts.max_seconds);
    std::snprintf(name, sizeof(name), "utt_%05zu.wav", i);
    signal::WriteWav(c.clean_dir / name, SynthSpeech(rng, speech, secs));
  }
  const std::size_t n_noise =
      opts.n_noise > 0 ? opts.n_noise : std::max<std::size_t>(3, opts.n_utts / 5);
  for (std::size_t i = 0; i < n_noise; ++i) {
    std::mt19937_64 rng = ItemRng(opts.seed, 2, i);
    std::snprintf(name, sizeof(name), "noise_%05zu.wav", i);
    signal::WriteWav(c.noise_dir / name,
                     SynthNoise(rng, noise, opts.noise_seconds));
  }
  return c;
}

}  // namespace tta::data
