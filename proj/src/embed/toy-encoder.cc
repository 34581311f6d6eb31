// src/embed/toy-encoder.cc

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

#include "tta/embed/toy-encoder.h"

#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>
#include <random>

#include "tta/autodiff/ops.h"
#include "tta/base/error.h"
#include "tta/base/io-util.h"

namespace tta::embed {
namespace {
constexpr char kMagic[] = "TTAENC01";
}  // namespace

ToyEncoder ToyEncoder::Create(const ToyEncoderConfig &cfg) {
  TTA_REQUIRE(cfg.dim >= 1, ErrorCode::kInvalidArgument,
              "encoder dimension must be positive");
  ToyEncoder enc;
  enc.cfg_ = cfg;
  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const std::array<std::size_t, 3> fan_in = {
      cfg.strides[0], cfg.strides[1] * cfg.channels[0],
      cfg.strides[2] * cfg.channels[1]};
  const std::array<std::size_t, 3> fan_out = {cfg.channels[0], cfg.channels[1],
                                              cfg.dim};
  for (std::size_t l = 0; l < 3; ++l) {
    // Gain above 1 keeps the tanh layers out of their linear regime.
    const double scale =
        (l < 2 ? 2.0 : 1.0) / std::sqrt(static_cast<double>(fan_in[l]));
    enc.weights_[l] = Tensor({fan_in[l], fan_out[l]});
    for (double &v : enc.weights_[l].storage()) v = gauss(rng) * scale;
    enc.biases_[l] = Tensor({fan_out[l]});
    // Only the first layer gets an offset.  Without one every feature is an
    // odd function of the input and frame embeddings cancel in the mean;
    // larger offsets push all utterances toward one shared direction.
    if (l == 0)
      for (double &v : enc.biases_[l].storage()) v = 0.2 * gauss(rng);
  }
  enc.Finalize();
  return enc;
}

void ToyEncoder::Finalize() {
  spec_.dim = cfg_.dim;
  spec_.frame_hop = cfg_.strides[0] * cfg_.strides[1] * cfg_.strides[2];
  spec_.sample_rate = signal::kDefaultSampleRate;
  spec_.frozen = true;
  spec_.encoder_id = "toy-cnn-d" + std::to_string(cfg_.dim) + "-s" +
                     std::to_string(cfg_.seed) + "-" + WeightsChecksum();
}

std::string ToyEncoder::WeightsChecksum() const {
  std::uint32_t crc = 0;
  for (std::size_t l = 0; l < 3; ++l) {
    crc = Crc32(weights_[l].values(), crc);
    crc = Crc32(biases_[l].values(), crc);
  }
  return Crc32Hex(crc);
}

ad::Var ToyEncoder::FrameEmbeddings(const ad::Var &waveform) const {
  ad::Tape &tape = *waveform.tape();
  const std::size_t hop = spec_.frame_hop;
  const std::size_t n = waveform.value().size();
  TTA_REQUIRE(n >= hop, ErrorCode::kTooShortInput,
              "utterance shorter than one encoder frame (" +
                  std::to_string(hop) + " samples)");
  const std::size_t frames = n / hop;
  ad::Var x = frames * hop == n ? waveform : ad::Crop(waveform, 0, frames * hop);
  x = ad::Standardize(x);
  std::size_t rows = frames * hop;
  for (std::size_t l = 0; l < 3; ++l) {
    rows /= cfg_.strides[l];
    x = ad::Reshape(x, {rows, weights_[l].rows()});
    x = ad::Linear(x, tape.Constant(weights_[l]), tape.Constant(biases_[l]));
    if (l < 2) x = ad::Tanh(x);
  }
  return ad::L2NormalizeRows(x);
}

void ToyEncoder::Save(const std::filesystem::path &path) const {
  nlohmann::json header = {
      {"encoder_id", spec_.encoder_id}, {"dim", cfg_.dim},
      {"seed", cfg_.seed},              {"strides", cfg_.strides},
      {"channels", cfg_.channels},      {"checksum", WeightsChecksum()}};
  if (path.has_parent_path())
    std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out.write(kMagic, 8);
  WriteLengthPrefixed(out, header.dump());
  for (std::size_t l = 0; l < 3; ++l) {
    WriteDoubles(out, weights_[l].values());
    WriteDoubles(out, biases_[l].values());
  }
}

ToyEncoder ToyEncoder::Load(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  char magic[8];
  std::string header_text;
  if (!in.read(magic, 8) || std::string(magic, 8) != kMagic ||
      !ReadLengthPrefixed(in, &header_text))
    throw Error(ErrorCode::kCorruptFile, path.string() + ": bad header");
  ToyEncoder enc;
  std::string checksum;
  try {
    nlohmann::json h = nlohmann::json::parse(header_text);
    enc.cfg_.dim = h.at("dim").get<std::size_t>();
    enc.cfg_.seed = h.at("seed").get<std::uint64_t>();
    enc.cfg_.strides = h.at("strides").get<std::array<std::size_t, 3>>();
    enc.cfg_.channels = h.at("channels").get<std::array<std::size_t, 2>>();
    checksum = h.at("checksum").get<std::string>();
  } catch (const nlohmann::json::exception &e) {
    throw Error(ErrorCode::kCorruptFile, path.string() + ": " + e.what());
  }
  const auto &c = enc.cfg_;
  const std::array<std::size_t, 3> fan_in = {
      c.strides[0], c.strides[1] * c.channels[0], c.strides[2] * c.channels[1]};
  const std::array<std::size_t, 3> fan_out = {c.channels[0], c.channels[1],
                                              c.dim};
  for (std::size_t l = 0; l < 3; ++l) {
    enc.weights_[l] = Tensor({fan_in[l], fan_out[l]});
    enc.biases_[l] = Tensor({fan_out[l]});
    if (!ReadDoubles(in, enc.weights_[l].values()) ||
        !ReadDoubles(in, enc.biases_[l].values()))
      throw Error(ErrorCode::kCorruptFile, path.string() + ": truncated");
  }
  if (enc.WeightsChecksum() != checksum)
    throw Error(ErrorCode::kCorruptFile, path.string() + ": checksum mismatch");
  enc.Finalize();
  return enc;
}

}  // namespace tta::embed
