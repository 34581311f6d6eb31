// include/tta/embed/cache.h

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

#ifndef TTA_EMBED_CACHE_H_
#define TTA_EMBED_CACHE_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "tta/data/manifest.h"
#include "tta/embed/encoder.h"

namespace tta::embed {

enum class Role : std::uint8_t { kClean = 0, kNoisy = 1 };
enum class Which { kClean, kNoisy, kBoth };

const char *RoleName(Role r);
Which ParseWhich(const std::string &s);

struct CachedEmbedding {
  std::string utterance_id;
  Role role = Role::kClean;
  std::vector<double> vector;
};

struct EmbeddingCache {
  std::string encoder_id;
  std::size_t dim = 0;
  std::vector<CachedEmbedding> records;

  /// Records of one role, in file order.
  std::vector<const CachedEmbedding *> WithRole(Role r) const;
};

/// Layout: u32 header length, JSON header {encoder_id, dim, count}, then per
/// record a length-prefixed id, a role byte and dim little-endian doubles.
void SaveCache(const EmbeddingCache &c, const std::filesystem::path &path);
EmbeddingCache LoadCache(const std::filesystem::path &path);

struct CacheOptions {
  Which which = Which::kBoth;
  std::optional<data::Split> split;  // all records when unset
  /// Extend an existing file instead of replacing it.  The stored encoder_id
  /// must match.
  bool append = false;
};

/// Encodes the manifest's signals and writes the cache.  Noisy signals are
/// reconstructed from the manifest with the data loader.  Returns the number
/// of records written by this call.
std::size_t CacheEmbeddings(const data::Manifest &manifest,
                            const Encoder &encoder,
                            const std::filesystem::path &path,
                            const CacheOptions &opts = {});

}  // namespace tta::embed

#endif  // TTA_EMBED_CACHE_H_
