// include/tta/data/manifest.h

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

#ifndef TTA_DATA_MANIFEST_H_
#define TTA_DATA_MANIFEST_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace tta::data {

enum class Split { kTrain, kTest };

const char *SplitName(Split s);
Split ParseSplit(const std::string &s);

/// One mixture: which clean file, which noise file, where in the noise the
/// segment starts and at what SNR.
struct MixRecord {
  std::string id;
  std::string clean_path;
  std::string noise_path;
  std::size_t noise_offset = 0;
  double snr_db = 0.0;
  Split split = Split::kTest;
};

struct Manifest {
  std::vector<MixRecord> records;

  std::vector<const MixRecord *> InSplit(Split s) const;
  const MixRecord *Find(const std::string &id) const;
};

/// JSON-lines: one record per line with the MixRecord field names.
void SaveManifest(const Manifest &m, const std::filesystem::path &path);
/// Validates finite SNRs and unique ids.
Manifest LoadManifest(const std::filesystem::path &path);

/// Content hash of a manifest file, used as its provenance id.
std::string ManifestId(const std::filesystem::path &path);

struct BuildManifestOptions {
  std::filesystem::path clean_dir;
  std::filesystem::path noise_dir;
  double snr_lo = 0.0;
  double snr_hi = 20.0;
  std::uint64_t seed = 0;
  Split split = Split::kTest;
  std::string id_prefix;  // prepended to the clean file stem
};

/// Every readable clean WAV (sorted by name) becomes exactly one record with
/// a uniformly drawn noise file, offset and SNR.  Unreadable files are
/// skipped with a warning; an empty result raises empty-manifest.
Manifest BuildManifest(const BuildManifestOptions &opts);

std::vector<std::filesystem::path> ListWavFiles(
    const std::filesystem::path &dir);

}  // namespace tta::data

#endif  // TTA_DATA_MANIFEST_H_
