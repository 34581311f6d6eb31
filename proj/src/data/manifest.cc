// src/data/manifest.cc

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

#include "tta/data/manifest.h"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>
#include <random>
#include <set>
#include <sstream>

#include "tta/base/error.h"
#include "tta/base/io-util.h"
#include "tta/signal/wav-io.h"

namespace tta::data {

using nlohmann::json;

const char *SplitName(Split s) { return s == Split::kTrain ? "train" : "test"; }

Split ParseSplit(const std::string &s) {
  if (s == "train") return Split::kTrain;
  if (s == "test") return Split::kTest;
  throw Error(ErrorCode::kInvalidArgument, "unknown split '" + s + "'");
}

std::vector<const MixRecord *> Manifest::InSplit(Split s) const {
  std::vector<const MixRecord *> out;
  for (const MixRecord &r : records)
    if (r.split == s) out.push_back(&r);
  return out;
}

const MixRecord *Manifest::Find(const std::string &id) const {
  for (const MixRecord &r : records)
    if (r.id == id) return &r;
  return nullptr;
}

void SaveManifest(const Manifest &m, const std::filesystem::path &path) {
  std::ostringstream os;
  for (const MixRecord &r : m.records) {
    json j = {{"id", r.id},
              {"clean_path", r.clean_path},
              {"noise_path", r.noise_path},
              {"noise_offset", r.noise_offset},
              {"snr_db", r.snr_db},
              {"split", SplitName(r.split)}};
    os << j.dump() << '\n';
  }
  WriteTextFile(path, os.str());
}

Manifest LoadManifest(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open manifest " + path.string());
  Manifest m;
  std::set<std::string> seen;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    MixRecord r;
    try {
      json j = json::parse(line);
      r.id = j.at("id").get<std::string>();
      r.clean_path = j.at("clean_path").get<std::string>();
      r.noise_path = j.at("noise_path").get<std::string>();
      r.noise_offset = j.at("noise_offset").get<std::size_t>();
      r.snr_db = j.at("snr_db").get<double>();
      r.split = ParseSplit(j.at("split").get<std::string>());
    } catch (const json::exception &e) {
      throw Error(ErrorCode::kCorruptFile, path.string() + ":" +
                                               std::to_string(lineno) + ": " +
                                               e.what());
    }
    TTA_REQUIRE(std::isfinite(r.snr_db), ErrorCode::kCorruptFile,
                "non-finite SNR for record " + r.id);
    TTA_REQUIRE(seen.insert(r.id).second, ErrorCode::kCorruptFile,
                "duplicate record id " + r.id);
    m.records.push_back(std::move(r));
  }
  return m;
}

std::string ManifestId(const std::filesystem::path &path) {
  return "manifest-" + FileCrc32Hex(path);
}

std::vector<std::filesystem::path> ListWavFiles(
    const std::filesystem::path &dir) {
  std::vector<std::filesystem::path> files;
  if (!std::filesystem::is_directory(dir)) return files;
  for (const auto &e : std::filesystem::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".wav")
      files.push_back(e.path());
  std::sort(files.begin(), files.end());
  return files;
}

Manifest BuildManifest(const BuildManifestOptions &opts) {
  TTA_REQUIRE(std::isfinite(opts.snr_lo) && std::isfinite(opts.snr_hi) &&
                  opts.snr_lo <= opts.snr_hi,
              ErrorCode::kInvalidArgument, "invalid SNR range");
  const auto clean_files = ListWavFiles(opts.clean_dir);
  const auto noise_files = ListWavFiles(opts.noise_dir);
  TTA_REQUIRE(!clean_files.empty(), ErrorCode::kEmptyManifest,
              "no clean WAV files in " + opts.clean_dir.string());
  TTA_REQUIRE(!noise_files.empty(), ErrorCode::kEmptyManifest,
              "no noise WAV files in " + opts.noise_dir.string());

  std::vector<std::string> noise_paths;
  std::vector<std::size_t> noise_lengths;
  for (const auto &p : noise_files) {
    try {
      noise_lengths.push_back(signal::ReadWav(p).size());
      noise_paths.push_back(p.string());
    } catch (const Error &e) {
      spdlog::warn("skipping unreadable noise file {}: {}", p.string(),
                   e.what());
    }
  }
  TTA_REQUIRE(!noise_paths.empty(), ErrorCode::kEmptyManifest,
              "no readable noise files");

  std::mt19937_64 rng(opts.seed);
  Manifest m;
  for (const auto &p : clean_files) {
    try {
      signal::ReadWav(p);
    } catch (const Error &e) {
      spdlog::warn("skipping unreadable clean file {}: {}", p.string(),
                   e.what());
      continue;
    }
    MixRecord r;
    r.id = opts.id_prefix + p.stem().string();
    r.clean_path = p.string();
    const std::size_t k = std::uniform_int_distribution<std::size_t>(
        0, noise_paths.size() - 1)(rng);
    r.noise_path = noise_paths[k];
    r.noise_offset = std::uniform_int_distribution<std::size_t>(
        0, noise_lengths[k] - 1)(rng);
    const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    r.snr_db = opts.snr_lo + (opts.snr_hi - opts.snr_lo) * u;
    r.split = opts.split;
    m.records.push_back(std::move(r));
  }
  TTA_REQUIRE(!m.records.empty(), ErrorCode::kEmptyManifest,
              "no readable clean files");
  return m;
}

}  // namespace tta::data
