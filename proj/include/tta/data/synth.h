// include/tta/data/synth.h

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

#ifndef TTA_DATA_SYNTH_H_
#define TTA_DATA_SYNTH_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <random>
#include <string>

#include "tta/signal/waveform.h"

// Desk-scale stand-in for real speech/noise corpora.  "Speech" is a train of
// syllables built from harmonic complexes whose pitch and formant
// resonances glide over time; "noise" is either colored noise with hum
// (source domain) or babble plus band-limited clatter (shifted domain).

namespace tta::data {

enum class Profile { kSource, kShiftedSpeaker, kShiftedNoise, kShiftedLanguage };

const char *ProfileName(Profile p);
Profile ParseProfile(const std::string &s);

struct SpeechStyle {
  double f0_lo = 90.0, f0_hi = 160.0;  // Hz, per-utterance base pitch range
  double formant_scale = 1.0;
  double syllable_lo = 0.12, syllable_hi = 0.30;  // s
  double pause_lo = 0.03, pause_hi = 0.15;        // s
  double glide_depth = 0.15;  // relative pitch glide over a syllable
  double fricative_prob = 0.1;
};

enum class NoiseKind { kColoredHum, kBabbleClatter };

struct NoiseStyle {
  NoiseKind kind = NoiseKind::kColoredHum;
};

SpeechStyle SpeechStyleFor(Profile p);
NoiseStyle NoiseStyleFor(Profile p);

signal::Waveform SynthSpeech(std::mt19937_64 &rng, const SpeechStyle &style,
                             double seconds,
                             int rate = signal::kDefaultSampleRate);
signal::Waveform SynthNoise(std::mt19937_64 &rng, const NoiseStyle &style,
                            double seconds,
                            int rate = signal::kDefaultSampleRate);

struct SynthOptions {
  std::size_t n_utts = 1;
  std::uint64_t seed = 0;
  Profile profile = Profile::kSource;
  /// Noise drawn from this profile instead of `profile` when set, e.g. to
  /// combine a speaker shift with a noise shift.
  std::optional<Profile> noise_profile;
  std::filesystem::path out_dir;
  std::size_t n_noise = 0;  // 0: max(3, n_utts / 5)
  double min_seconds = 1.0;
  double max_seconds = 5.0;
  double noise_seconds = 8.0;
};

struct SynthCorpus {
  std::filesystem::path clean_dir;
  std::filesystem::path noise_dir;
};

/// Writes <out_dir>/clean/utt_NNNNN.wav and <out_dir>/noise/noise_NNNNN.wav
/// (float32, 16 kHz).  Output depends only on the options.
SynthCorpus GenerateCorpus(const SynthOptions &opts);

/// Deterministic per-item generator derived from (seed, stream, index).
std::mt19937_64 ItemRng(std::uint64_t seed, std::uint64_t stream,
                        std::uint64_t index);

}  // namespace tta::data

#endif  // TTA_DATA_SYNTH_H_
