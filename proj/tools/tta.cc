// tools/tta.cc

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

// Command line front end for the adaptation pipeline.
//
//   tta synth | mix | init-encoder | embed | fit-diet | eval-diet |
//       train-source | run-tta | report | experiment
//
// Exit status: 0 on success, 2 when inputs fail validation, 3 when a stage
// fails at run time (run-tta leaves a resume token in <out>/resume).

#include <spdlog/spdlog.h>

#include <CLI11.hpp>
#include <iostream>

#include "tta/base/error.h"
#include "tta/base/io-util.h"
#include "tta/data/stream.h"
#include "tta/harness/experiment.h"

namespace {

using namespace tta;
using namespace tta::harness;

// Loads an experiment config (or the defaults) and applies --set overrides.
ExperimentConfig ResolveConfig(const std::string &path,
                               const std::vector<std::string> &sets,
                               bool need_targets) {
  nlohmann::json doc = ToJson(ExperimentConfig{});
  if (!path.empty()) {
    try {
      doc = nlohmann::json::parse(ReadTextFile(path));
    } catch (const nlohmann::json::exception &e) {
      throw Error(ErrorCode::kInvalidArgument, path + ": " + e.what());
    }
  }
  for (const auto &s : sets) ApplyOverride(&doc, s);
  // Single-stage verbs do not need target datasets.
  if (!need_targets && doc.value("targets", nlohmann::json::array()).empty())
    doc["targets"] = {{{"name", "unused"}}};
  return ConfigFromJson(doc);
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Test-time adaptation for speech enhancement"};
  app.require_subcommand(1);
  std::string log_level = "info";
  app.add_option("--log-level", log_level, "trace|debug|info|warn|error");

  std::string config_path;
  std::vector<std::string> sets;
  auto add_config = [&](CLI::App *c) {
    c->add_option("--config", config_path, "experiment config (JSON)");
    c->add_option("--set", sets, "override, e.g. laden.gamma=0.1")
        ->take_all();
  };

  // synth
  auto *synth = app.add_subcommand("synth", "synthesize a speech/noise corpus");
  DatasetSpec ds;
  std::string synth_out, profile = "source", noise_profile;
  synth->add_option("--out", synth_out, "output directory")->required();
  synth->add_option("--profile", profile,
                    "source|shifted_speaker|shifted_noise|shifted_language");
  synth->add_option("--noise-profile", noise_profile,
                    "profile for the noise (defaults to --profile)");
  synth->add_option("--n", ds.n_utts, "number of utterances");
  synth->add_option("--seed", ds.seed);
  synth->add_option("--min-seconds", ds.min_seconds);
  synth->add_option("--max-seconds", ds.max_seconds);

  // mix
  auto *mix = app.add_subcommand("mix", "pair clean and noise files at random SNRs");
  data::BuildManifestOptions mix_opts;
  mix_opts.snr_lo = -2.5;
  mix_opts.snr_hi = 17.5;
  std::string mix_out, mix_split = "test";
  mix->add_option("--clean", mix_opts.clean_dir)->required();
  mix->add_option("--noise", mix_opts.noise_dir)->required();
  mix->add_option("--out", mix_out, "manifest path")->required();
  mix->add_option("--snr-lo", mix_opts.snr_lo);
  mix->add_option("--snr-hi", mix_opts.snr_hi);
  std::size_t mix_holdout = 0;
  mix->add_option("--holdout", mix_holdout,
                  "move the last N records to the test split");
  mix->add_option("--seed", mix_opts.seed);
  mix->add_option("--split", mix_split, "train|test");
  mix->add_option("--prefix", mix_opts.id_prefix, "utterance id prefix");

  // init-encoder
  auto *init_enc = app.add_subcommand("init-encoder", "create a toy encoder");
  std::string enc_out;
  std::size_t enc_dim = 64;
  std::uint64_t enc_seed = 7;
  init_enc->add_option("--out", enc_out)->required();
  init_enc->add_option("--dim", enc_dim);
  init_enc->add_option("--seed", enc_seed);

  // embed
  auto *embed = app.add_subcommand("embed", "cache utterance embeddings");
  std::string emb_manifest, emb_encoder, emb_out, emb_which = "both",
                                                  emb_split;
  bool emb_append = false;
  embed->add_option("--manifest", emb_manifest)->required();
  embed->add_option("--encoder", emb_encoder)->required();
  embed->add_option("--out", emb_out)->required();
  embed->add_option("--which", emb_which, "clean|noisy|both");
  embed->add_option("--split", emb_split, "train|test (default: all)");
  embed->add_flag("--append", emb_append);

  // fit-diet
  auto *fit = app.add_subcommand("fit-diet", "fit the embedding transformation");
  std::string fit_cache, fit_out, fit_manifest;
  diet::FitOptions fit_opts;
  fit->add_option("--cache", fit_cache, "cache with clean and noisy records")
      ->required();
  fit->add_option("--out", fit_out)->required();
  fit->add_option("--ridge", fit_opts.ridge);
  fit->add_flag("--affine", fit_opts.affine);
  fit->add_option("--source-manifest", fit_manifest,
                  "manifest the cache came from, recorded in the map");

  // eval-diet
  auto *eval = app.add_subcommand("eval-diet", "similarity table per dataset");
  std::string eval_diet, eval_json;
  std::vector<std::string> eval_caches;
  eval->add_option("--diet", eval_diet)->required();
  eval->add_option("--cache", eval_caches, "name=path, repeatable")
      ->required()
      ->take_all();
  eval->add_option("--json", eval_json, "also write the table as JSON");

  // train-source
  auto *train = app.add_subcommand("train-source", "train the source model");
  std::string tr_manifest, tr_out;
  train->add_option("--manifest", tr_manifest)->required();
  train->add_option("--out", tr_out, "checkpoint path")->required();
  add_config(train);

  // run-tta
  auto *run = app.add_subcommand("run-tta", "adapt over a target stream");
  RunRequest req;
  std::string method = "laden";
  run->add_option("--method", method, "laden|remixit|source_only");
  run->add_option("--manifest", req.manifest)->required();
  run->add_option("--checkpoint", req.checkpoint)->required();
  run->add_option("--diet", req.diet);
  run->add_option("--encoder", req.encoder);
  run->add_option("--seed", req.seed, "stream order seed");
  run->add_option("--dataset", req.dataset, "dataset label for reports");
  run->add_option("--out", req.out_dir)->required();
  run->add_option("--resume", req.resume, "resume.json of an interrupted run");
  add_config(run);

  // report
  auto *rep = app.add_subcommand("report", "aggregate runs into tables");
  std::string rep_runs, rep_out;
  rep->add_option("--runs", rep_runs)->required();
  rep->add_option("--out", rep_out)->required();

  // experiment
  auto *exp = app.add_subcommand("experiment", "run every stage from a config");
  std::string exp_out;
  add_config(exp);
  exp->add_option("--output-dir", exp_out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  spdlog::set_level(spdlog::level::from_str(log_level));

  try {
    if (*synth) {
      ds.name = "synth";
      ds.speech = data::ParseProfile(profile);
      if (!noise_profile.empty()) ds.noise = data::ParseProfile(noise_profile);
      const auto c = CmdSynth(ds, synth_out);
      std::cout << c.clean_dir.string() << '\n' << c.noise_dir.string() << '\n';
    } else if (*mix) {
      mix_opts.split = data::ParseSplit(mix_split);
      const auto m = CmdMix(mix_opts, mix_out, mix_holdout);
      std::cout << m.records.size() << " records, manifest "
                << data::ManifestId(mix_out) << '\n';
    } else if (*init_enc) {
      std::cout << CmdInitEncoder(enc_dim, enc_seed, enc_out) << '\n';
    } else if (*embed) {
      embed::CacheOptions o;
      o.which = embed::ParseWhich(emb_which);
      if (!emb_split.empty()) o.split = data::ParseSplit(emb_split);
      o.append = emb_append;
      std::cout << CmdEmbed(emb_manifest, emb_encoder, emb_out, o)
                << " embeddings written\n";
    } else if (*fit) {
      if (!fit_manifest.empty())
        fit_opts.source_manifest_id = data::ManifestId(fit_manifest);
      const auto m = CmdFitDiet(fit_cache, fit_out, fit_opts);
      std::cout << "K=" << m.k_samples << " d=" << m.dim()
                << " residual=" << m.fit_residual
                << (m.rank_deficient ? " (rank deficient)" : "") << '\n';
    } else if (*eval) {
      std::vector<std::pair<std::string, fs::path>> caches;
      for (const auto &s : eval_caches) {
        const auto eq = s.find('=');
        if (eq == std::string::npos)
          caches.emplace_back(fs::path(s).stem().string(), s);
        else
          caches.emplace_back(s.substr(0, eq), s.substr(eq + 1));
      }
      const auto rows = CmdEvalDiet(eval_diet, caches);
      std::cout << FormatDietTable(rows);
      if (!eval_json.empty())
        WriteTextFile(eval_json, DietTableJson(rows).dump(2));
    } else if (*train) {
      const auto cfg = ResolveConfig(config_path, sets, false);
      const auto r = CmdTrainSource(tr_manifest, cfg.model, cfg.train, tr_out);
      if (r.validation_utts == 0)
        std::cout << "no test split to validate on; ";
      else
        std::cout << "validation MSE " << r.initial_val_mse << " -> "
                  << r.final_val_mse << " over " << r.validation_utts
                  << " utterances; ";
      std::cout << r.steps << " steps\n";
    } else if (*run) {
      const auto cfg = ResolveConfig(config_path, sets, false);
      req.method = engine::ParseMethod(method);
      req.laden = cfg.laden;
      req.remixit = cfg.remixit;
      req.pesq_command = cfg.pesq_command;
      if (req.dataset.empty()) req.dataset = req.manifest.parent_path().filename();
      const auto s = CmdRunTta(req);
      std::cout << s.ToJson().dump(2) << '\n';
    } else if (*rep) {
      const auto t = CmdReport(rep_runs, rep_out);
      std::cout << t.results.Format() << "\ndelta vs source_only\n"
                << t.deltas.Format();
    } else if (*exp) {
      if (!exp_out.empty()) sets.push_back("output_dir=\"" + exp_out + "\"");
      const auto cfg = ResolveConfig(config_path, sets, true);
      const auto r = RunExperiment(cfg);
      std::cout << FormatDietTable(r.diet_eval) << '\n'
                << r.tables.results.Format() << "\ndelta vs source_only\n"
                << r.tables.deltas.Format();
    }
  } catch (const Error &e) {
    spdlog::error("{}", e.what());
    return ExitCodeFor(e.code());
  } catch (const std::exception &e) {
    spdlog::error("{}", e.what());
    return 3;
  }
  return 0;
}
