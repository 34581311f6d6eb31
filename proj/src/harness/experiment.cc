// src/harness/experiment.cc

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

#include "tta/harness/experiment.h"

#include <spdlog/spdlog.h>

#include "tta/base/io-util.h"

namespace tta::harness {

ExperimentResult RunExperiment(const ExperimentConfig &cfg) {
  cfg.Validate();
  const fs::path out = cfg.output_dir;
  fs::create_directories(out);
  WriteTextFile(out / "config.json", ToJson(cfg).dump(2));
  ExperimentResult result;

  spdlog::info("preparing data");
  const fs::path source_manifest =
      PrepareDataset(cfg.source, out / "data" / cfg.source.name, cfg.snr_lo,
                     cfg.snr_hi, data::Split::kTrain, cfg.train.validation_utts);
  std::vector<std::pair<std::string, fs::path>> targets;
  for (const auto &t : cfg.targets)
    targets.emplace_back(t.name,
                         PrepareDataset(t, out / "data" / t.name, cfg.snr_lo,
                                        cfg.snr_hi, data::Split::kTest));

  spdlog::info("embedding and fitting DIET");
  const fs::path encoder = out / "encoder.bin";
  CmdInitEncoder(cfg.encoder_dim, cfg.encoder_seed, encoder);
  embed::CacheOptions train_only;
  train_only.split = data::Split::kTrain;
  const fs::path source_cache = out / "cache" / (cfg.source.name + ".cache");
  CmdEmbed(source_manifest, encoder, source_cache, train_only);
  diet::FitOptions fit;
  fit.ridge = cfg.diet_ridge;
  fit.source_manifest_id = data::ManifestId(source_manifest);
  const fs::path diet_path = out / "diet.bin";
  CmdFitDiet(source_cache, diet_path, fit);

  std::vector<std::pair<std::string, fs::path>> target_caches;
  embed::CacheOptions test_only;
  test_only.split = data::Split::kTest;
  for (const auto &[name, manifest] : targets) {
    const fs::path cache = out / "cache" / (name + ".cache");
    CmdEmbed(manifest, encoder, cache, test_only);
    target_caches.emplace_back(name, cache);
  }
  result.diet_eval = CmdEvalDiet(diet_path, target_caches);
  WriteTextFile(out / "diet_eval.json", DietTableJson(result.diet_eval).dump(2));
  WriteTextFile(out / "diet_eval.txt", FormatDietTable(result.diet_eval));

  spdlog::info("training the source model");
  const fs::path checkpoint = out / "source.ckpt";
  result.train = CmdTrainSource(source_manifest, cfg.model, cfg.train, checkpoint);
  spdlog::info("source validation MSE {:.6g} -> {:.6g}",
               result.train.initial_val_mse, result.train.final_val_mse);

  for (const auto &[name, manifest] : targets)
    for (std::uint64_t seed : cfg.seeds)
      for (engine::Method method : cfg.methods) {
        RunRequest req;
        req.method = method;
        req.dataset = name;
        req.manifest = manifest;
        req.checkpoint = checkpoint;
        req.diet = diet_path;
        req.encoder = encoder;
        req.seed = seed;
        req.out_dir = out / "runs" / name / engine::MethodName(method) /
                      ("seed-" + std::to_string(seed));
        req.laden = cfg.laden;
        req.remixit = cfg.remixit;
        req.pesq_command = cfg.pesq_command;
        RunSummary s = CmdRunTta(req);
        const auto it = s.aggregate.find("si_sdr");
        spdlog::info("{} {} seed {}: SI-SDR {:.3f} dB over {} utterances",
                     name, s.method, seed,
                     it == s.aggregate.end() ? 0.0 : it->second, s.utterances);
        result.runs.push_back(std::move(s));
      }

  result.tables = CmdReport(out / "runs", out / "report");
  return result;
}

}  // namespace tta::harness
