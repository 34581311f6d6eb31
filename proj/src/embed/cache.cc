// src/embed/cache.cc

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

#include "tta/embed/cache.h"

#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>

#include "tta/base/error.h"
#include "tta/base/io-util.h"
#include "tta/data/stream.h"

namespace tta::embed {

const char *RoleName(Role r) { return r == Role::kClean ? "clean" : "noisy"; }

Which ParseWhich(const std::string &s) {
  if (s == "clean") return Which::kClean;
  if (s == "noisy") return Which::kNoisy;
  if (s == "both") return Which::kBoth;
  throw Error(ErrorCode::kInvalidArgument, "unknown signal selection: " + s);
}

std::vector<const CachedEmbedding *> EmbeddingCache::WithRole(Role r) const {
  std::vector<const CachedEmbedding *> out;
  for (const auto &rec : records)
    if (rec.role == r) out.push_back(&rec);
  return out;
}

void SaveCache(const EmbeddingCache &c, const std::filesystem::path &path) {
  nlohmann::json header = {{"encoder_id", c.encoder_id},
                           {"dim", c.dim},
                           {"count", c.records.size()}};
  if (path.has_parent_path())
    std::filesystem::create_directories(path.parent_path());
  // Write to a sibling and rename so readers never see a half-written cache.
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::kIo, "cannot write " + tmp.string());
    WriteLengthPrefixed(out, header.dump());
    for (const auto &r : c.records) {
      TTA_REQUIRE(r.vector.size() == c.dim, ErrorCode::kInvalidArgument,
                  "record " + r.utterance_id + " has wrong dimension");
      WriteLengthPrefixed(out, r.utterance_id);
      out.put(static_cast<char>(r.role));
      WriteDoubles(out, r.vector);
    }
    if (!out) throw Error(ErrorCode::kIo, "write failed: " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

EmbeddingCache LoadCache(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::string header_text;
  if (!ReadLengthPrefixed(in, &header_text, 1u << 20))
    throw Error(ErrorCode::kCorruptFile, path.string() + ": bad header");
  EmbeddingCache c;
  std::size_t count = 0;
  try {
    auto h = nlohmann::json::parse(header_text);
    c.encoder_id = h.at("encoder_id").get<std::string>();
    c.dim = h.at("dim").get<std::size_t>();
    count = h.at("count").get<std::size_t>();
  } catch (const nlohmann::json::exception &e) {
    throw Error(ErrorCode::kCorruptFile, path.string() + ": " + e.what());
  }
  TTA_REQUIRE(c.dim >= 1, ErrorCode::kCorruptFile,
              path.string() + ": zero dimension");
  c.records.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    CachedEmbedding r;
    char role = 0;
    r.vector.resize(c.dim);
    if (!ReadLengthPrefixed(in, &r.utterance_id, 1u << 16) || !in.get(role) ||
        (role != 0 && role != 1) || !ReadDoubles(in, r.vector))
      throw Error(ErrorCode::kCorruptFile,
                  path.string() + ": truncated at record " + std::to_string(i));
    r.role = static_cast<Role>(role);
    c.records.push_back(std::move(r));
  }
  if (in.peek() != std::char_traits<char>::eof())
    throw Error(ErrorCode::kCorruptFile, path.string() + ": trailing bytes");
  return c;
}

std::size_t CacheEmbeddings(const data::Manifest &manifest,
                            const Encoder &encoder,
                            const std::filesystem::path &path,
                            const CacheOptions &opts) {
  EmbeddingCache cache;
  if (opts.append && std::filesystem::exists(path)) {
    cache = LoadCache(path);
    if (cache.encoder_id != encoder.spec().encoder_id)
      throw Error(ErrorCode::kEncoderConflict,
                  path.string() + " was built with encoder " +
                      cache.encoder_id + ", not " + encoder.spec().encoder_id);
  }
  cache.encoder_id = encoder.spec().encoder_id;
  cache.dim = encoder.spec().dim;
  const std::size_t before = cache.records.size();
  data::PairLoader loader;
  for (const auto &rec : manifest.records) {
    if (opts.split && rec.split != *opts.split) continue;
    data::UtterancePair p = loader.Load(rec);
    if (opts.which != Which::kNoisy)
      cache.records.push_back(
          {rec.id, Role::kClean, encoder.Encode(p.clean, rec.id).vector});
    if (opts.which != Which::kClean)
      cache.records.push_back(
          {rec.id, Role::kNoisy, encoder.Encode(p.noisy, rec.id).vector});
  }
  SaveCache(cache, path);
  return cache.records.size() - before;
}

}  // namespace tta::embed
