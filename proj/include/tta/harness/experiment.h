// include/tta/harness/experiment.h

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

#ifndef TTA_HARNESS_EXPERIMENT_H_
#define TTA_HARNESS_EXPERIMENT_H_

#include <filesystem>
#include <vector>

#include "tta/harness/config.h"
#include "tta/harness/pipeline.h"
#include "tta/harness/results.h"

namespace tta::harness {

struct ExperimentResult {
  std::vector<RunSummary> runs;
  std::vector<DietEvalRow> diet_eval;
  model::TrainReport train;
  ReportTables tables;
};

/// Runs every stage of an experiment under cfg.output_dir:
///   data/<dataset>/       synthesized corpora and manifests
///   encoder.bin           toy encoder
///   cache/<dataset>.cache embeddings
///   diet.bin, diet_eval.* DIET map fitted on the source train split
///   source.ckpt           source model
///   runs/<dataset>/<method>/seed-<s>/
///   report/               results and delta tables
/// All methods of one seed consume the same stream order.
ExperimentResult RunExperiment(const ExperimentConfig &cfg);

}  // namespace tta::harness

#endif  // TTA_HARNESS_EXPERIMENT_H_
