// include/tta/data/stream.h

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

#ifndef TTA_DATA_STREAM_H_
#define TTA_DATA_STREAM_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "tta/data/manifest.h"
#include "tta/signal/waveform.h"

namespace tta::data {

/// Clean/noisy pair built from a MixRecord.  Only the metrics side of a
/// test-time run may look at `clean`.
struct UtterancePair {
  signal::Waveform clean;
  signal::Waveform noisy;
  MixRecord record;
};

/// What adaptation code is allowed to see of a target utterance.
struct NoisyUtterance {
  std::string id;
  signal::Waveform noisy;
};

NoisyUtterance NoisyView(const UtterancePair &p);
std::vector<NoisyUtterance> NoisyView(const std::vector<UtterancePair> &batch);

/// Adaptation order over the test split of a manifest.
struct StreamOrder {
  std::uint64_t seed = 0;
  std::vector<std::string> permutation;
};

StreamOrder MakeStreamOrder(const Manifest &m, std::uint64_t seed,
                            Split split = Split::kTest);
void SaveStreamOrder(const StreamOrder &o, const std::filesystem::path &path);
StreamOrder LoadStreamOrder(const std::filesystem::path &path);

/// Reads and mixes audio for records; noise files are decoded once.
class PairLoader {
 public:
  UtterancePair Load(const MixRecord &r);

 private:
  const signal::Waveform &Noise(const std::string &path,
                                const std::string &id);
  std::map<std::string, signal::Waveform> noise_cache_;
};

/// Yields the permutation's records in order, batch_size at a time (the
/// final batch may be shorter).  A missing audio file aborts with the id.
class UtteranceStream {
 public:
  UtteranceStream(const Manifest &manifest, StreamOrder order,
                  std::size_t batch_size);

  bool Next(std::vector<UtterancePair> *batch);
  std::size_t num_batches() const;
  std::size_t position() const { return pos_; }  // records consumed
  /// Positions the stream at a record index (for resuming).
  void Seek(std::size_t record_index);
  const StreamOrder &order() const { return order_; }

 private:
  std::vector<const MixRecord *> records_;
  StreamOrder order_;
  std::size_t batch_size_;
  std::size_t pos_ = 0;
  PairLoader loader_;
};

/// Loads every record of a split in manifest order.
std::vector<UtterancePair> LoadSplit(const Manifest &m, Split split);

}  // namespace tta::data

#endif  // TTA_DATA_STREAM_H_
