// include/tta/harness/config.h

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

#ifndef TTA_HARNESS_CONFIG_H_
#define TTA_HARNESS_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "tta/data/synth.h"
#include "tta/engine/run.h"
#include "tta/model/am-model.h"

namespace tta::harness {

/// A synthetic dataset: speech of one profile mixed with noise of another.
struct DatasetSpec {
  std::string name;
  data::Profile speech = data::Profile::kSource;
  std::optional<data::Profile> noise;  // defaults to the speech profile
  std::size_t n_utts = 100;
  std::uint64_t seed = 0;
  double min_seconds = 1.0;
  double max_seconds = 5.0;
  // An existing manifest to use instead of synthesizing one.
  std::filesystem::path manifest;
};

inline DatasetSpec DefaultSource() {
  DatasetSpec d;
  d.name = "source";
  d.n_utts = 200;
  return d;
}

struct TrainSettings {
  std::size_t epochs = 10;
  std::size_t batch_size = 4;
  double lr = 1e-3;
  double weight_decay = 0.01;
  double segment_seconds = 2.0;  // 0 trains on whole utterances
  std::size_t validation_utts = 20;  // held out from the source dataset
  std::uint64_t seed = 0;
};

struct ExperimentConfig {
  std::string name = "experiment";
  std::filesystem::path output_dir = "runs/experiment";
  std::vector<std::uint64_t> seeds = {0};
  std::vector<engine::Method> methods = {engine::Method::kSourceOnly,
                                         engine::Method::kLaden,
                                         engine::Method::kRemixIt};
  DatasetSpec source = DefaultSource();
  std::vector<DatasetSpec> targets;
  double snr_lo = -2.5;
  double snr_hi = 17.5;
  std::size_t encoder_dim = 64;
  std::uint64_t encoder_seed = 7;
  double diet_ridge = 0.0;
  model::AmConfig model;
  TrainSettings train;
  engine::LadenConfig laden;
  engine::RemixItConfig remixit;
  std::string pesq_command;

  /// Throws invalid-argument describing the first violated constraint,
  /// including referenced manifests that do not exist.
  void Validate() const;
};

nlohmann::json ToJson(const ExperimentConfig &c);
ExperimentConfig ConfigFromJson(const nlohmann::json &j);
ExperimentConfig LoadConfig(const std::filesystem::path &path);

/// Applies "a.b.c=value" to a JSON document.  The value is parsed as JSON
/// when possible and taken as a string otherwise.
void ApplyOverride(nlohmann::json *doc, const std::string &assignment);

}  // namespace tta::harness

#endif  // TTA_HARNESS_CONFIG_H_
