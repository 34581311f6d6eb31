// src/data/stream.cc

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

#include "tta/data/stream.h"

#include <algorithm>
#include <filesystem>
#include <nlohmann/json.hpp>
#include <random>
#include <set>

#include "tta/base/error.h"
#include "tta/base/io-util.h"
#include "tta/data/mix.h"
#include "tta/signal/wav-io.h"

namespace tta::data {

NoisyUtterance NoisyView(const UtterancePair &p) {
  return NoisyUtterance{p.record.id, p.noisy};
}

std::vector<NoisyUtterance> NoisyView(const std::vector<UtterancePair> &batch) {
  std::vector<NoisyUtterance> out;
  out.reserve(batch.size());
  for (const UtterancePair &p : batch) out.push_back(NoisyView(p));
  return out;
}

StreamOrder MakeStreamOrder(const Manifest &m, std::uint64_t seed,
                            Split split) {
  StreamOrder o;
  o.seed = seed;
  for (const MixRecord *r : m.InSplit(split)) o.permutation.push_back(r->id);
  std::mt19937_64 rng(seed);
  // Fisher-Yates with an explicit draw so the order does not depend on the
  // standard library's shuffle implementation.
  for (std::size_t i = o.permutation.size(); i > 1; --i) {
    const std::size_t j =
        std::uniform_int_distribution<std::size_t>(0, i - 1)(rng);
    std::swap(o.permutation[i - 1], o.permutation[j]);
  }
  return o;
}

void SaveStreamOrder(const StreamOrder &o, const std::filesystem::path &path) {
  nlohmann::json j = {{"seed", o.seed}, {"permutation", o.permutation}};
  WriteTextFile(path, j.dump(1) + "\n");
}

StreamOrder LoadStreamOrder(const std::filesystem::path &path) {
  try {
    nlohmann::json j = nlohmann::json::parse(ReadTextFile(path));
    StreamOrder o;
    o.seed = j.at("seed").get<std::uint64_t>();
    o.permutation = j.at("permutation").get<std::vector<std::string>>();
    return o;
  } catch (const nlohmann::json::exception &e) {
    throw Error(ErrorCode::kCorruptFile, path.string() + ": " + e.what());
  }
}

const signal::Waveform &PairLoader::Noise(const std::string &path,
                                          const std::string &id) {
  auto it = noise_cache_.find(path);
  if (it != noise_cache_.end()) return it->second;
  if (!std::filesystem::exists(path))
    throw Error(ErrorCode::kMissingAudio,
                "record " + id + ": noise file " + path + " not found");
  return noise_cache_.emplace(path, signal::ReadWav(path)).first->second;
}

UtterancePair PairLoader::Load(const MixRecord &r) {
  if (!std::filesystem::exists(r.clean_path))
    throw Error(ErrorCode::kMissingAudio,
                "record " + r.id + ": clean file " + r.clean_path +
                    " not found");
  UtterancePair p;
  p.record = r;
  p.clean = signal::ReadWav(r.clean_path);
  p.noisy = Mix(p.clean, Noise(r.noise_path, r.id), r.noise_offset, r.snr_db);
  return p;
}

UtteranceStream::UtteranceStream(const Manifest &manifest, StreamOrder order,
                                 std::size_t batch_size)
    : order_(std::move(order)), batch_size_(batch_size) {
  TTA_REQUIRE(batch_size_ >= 1, ErrorCode::kInvalidArgument,
              "batch size must be at least 1");
  const auto test = manifest.InSplit(Split::kTest);
  std::set<std::string> expected;
  for (const MixRecord *r : test) expected.insert(r->id);
  std::set<std::string> seen;
  for (const std::string &id : order_.permutation) {
    TTA_REQUIRE(expected.count(id) == 1 && seen.insert(id).second,
                ErrorCode::kInvalidArgument,
                "stream order is not a permutation of the test split (id " +
                    id + ")");
    records_.push_back(manifest.Find(id));
  }
  TTA_REQUIRE(seen.size() == expected.size(), ErrorCode::kInvalidArgument,
              "stream order does not cover the test split");
}

bool UtteranceStream::Next(std::vector<UtterancePair> *batch) {
  batch->clear();
  if (pos_ >= records_.size()) return false;
  const std::size_t end = std::min(records_.size(), pos_ + batch_size_);
  for (; pos_ < end; ++pos_) batch->push_back(loader_.Load(*records_[pos_]));
  return true;
}

std::size_t UtteranceStream::num_batches() const {
  return (records_.size() + batch_size_ - 1) / batch_size_;
}

void UtteranceStream::Seek(std::size_t record_index) {
  TTA_REQUIRE(record_index <= records_.size(), ErrorCode::kInvalidArgument,
              "seek past end of stream");
  pos_ = record_index;
}

std::vector<UtterancePair> LoadSplit(const Manifest &m, Split split) {
  PairLoader loader;
  std::vector<UtterancePair> out;
  for (const MixRecord *r : m.InSplit(split)) out.push_back(loader.Load(*r));
  return out;
}

}  // namespace tta::data
