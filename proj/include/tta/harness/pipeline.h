// include/tta/harness/pipeline.h

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

#ifndef TTA_HARNESS_PIPELINE_H_
#define TTA_HARNESS_PIPELINE_H_

// Pipeline stages.  Every stage reads its inputs from files, checks the ids
// and checksums that tie them together, and writes its outputs
// deterministically, so re-running a stage with the same inputs and seed
// reproduces the same bytes (wall-clock fields aside).

#include <cstdint>
#include <filesystem>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "tta/base/error.h"
#include "tta/data/manifest.h"
#include "tta/diet/diet.h"
#include "tta/embed/cache.h"
#include "tta/engine/run.h"
#include "tta/harness/config.h"
#include "tta/model/am-model.h"
#include "tta/model/train.h"

namespace tta::harness {

namespace fs = std::filesystem;

/// Process exit code for a failure: 2 for validation errors, 3 otherwise.
int ExitCodeFor(ErrorCode code);

/// Synthesizes the corpus of `spec` under `dir` (clean/ and noise/).
data::SynthCorpus CmdSynth(const DatasetSpec &spec, const fs::path &dir);

/// Pairs every clean file with a noise file and an SNR, writes the manifest.
/// With `holdout` > 0 the last records form the test split, the rest train.
data::Manifest CmdMix(const data::BuildManifestOptions &opts,
                      const fs::path &manifest_path, std::size_t holdout = 0);

/// Synthesizes and mixes a dataset.  With `holdout` > 0 the last records
/// are moved to the test split and the rest to train.  Returns the manifest
/// path; an existing manifest named in `spec` is returned unchanged.
fs::path PrepareDataset(const DatasetSpec &spec, const fs::path &dir,
                        double snr_lo, double snr_hi, data::Split split,
                        std::size_t holdout = 0);

/// Creates a toy encoder and saves it.  Returns its encoder id.
std::string CmdInitEncoder(std::size_t dim, std::uint64_t seed,
                           const fs::path &path);

/// Embeds the utterances of a manifest into a cache file.
std::size_t CmdEmbed(const fs::path &manifest, const fs::path &encoder,
                     const fs::path &cache, const embed::CacheOptions &opts);

/// Fits DIET on a cache holding clean and noisy records of the same
/// utterances.  Writes the map and returns it.
diet::DietMap CmdFitDiet(const fs::path &cache, const fs::path &out,
                         const diet::FitOptions &opts);

struct DietEvalRow {
  std::string dataset;
  diet::DietReport report;
};

/// Evaluates a fitted map on caches of one or more target datasets.
/// Refuses caches from another encoder.
std::vector<DietEvalRow> CmdEvalDiet(
    const fs::path &diet_path,
    const std::vector<std::pair<std::string, fs::path>> &caches);

/// Two rows (noisy and transformed similarity), one column per dataset.
std::string FormatDietTable(const std::vector<DietEvalRow> &rows);
nlohmann::json DietTableJson(const std::vector<DietEvalRow> &rows);

/// Trains the source model on the train split of `manifest`, validating on
/// its test split, and writes a checkpoint tagged with the manifest id.
model::TrainReport CmdTrainSource(const fs::path &manifest,
                                  const model::AmConfig &config,
                                  const TrainSettings &train,
                                  const fs::path &checkpoint);

struct RunRequest {
  engine::Method method = engine::Method::kLaden;
  std::string dataset;
  fs::path manifest;
  fs::path checkpoint;  // source model
  fs::path diet;        // LaDen only
  fs::path encoder;     // LaDen only
  std::uint64_t seed = 0;
  fs::path out_dir;
  engine::LadenConfig laden;
  engine::RemixItConfig remixit;
  std::string pesq_command;
  fs::path resume;  // resume.json of an interrupted run
};

/// Summary of one adaptation run, as stored in run.json.
struct RunSummary {
  std::string method;
  std::string dataset;
  std::uint64_t seed = 0;
  std::size_t utterances = 0;
  std::size_t steps = 0;
  std::size_t updates = 0;
  std::size_t skipped = 0;
  std::map<std::string, double> aggregate;  // metrics with a value
  std::optional<double> l_ld_first_quartile;
  std::optional<double> l_ld_last_quartile;
  std::string manifest_id;
  std::string checkpoint_crc;
  std::string encoder_id;
  double wall_seconds = 0.0;

  nlohmann::json ToJson() const;
  static RunSummary FromJson(const nlohmann::json &j);
};

/// Runs one method over the test split of a manifest in the order drawn
/// from `seed`.  Writes order.json, log.jsonl, metrics.json and run.json
/// into out_dir.  On failure the resume token lands in out_dir/resume.
RunSummary CmdRunTta(const RunRequest &req);

/// Mean L_LD over the first and last quarter of the logged steps.
std::pair<std::optional<double>, std::optional<double>> LatentLossQuartiles(
    const std::vector<nlohmann::json> &log);

std::vector<nlohmann::json> ReadLog(const fs::path &path);

}  // namespace tta::harness

#endif  // TTA_HARNESS_PIPELINE_H_
