// src/harness/pipeline.cc

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

#include "tta/harness/pipeline.h"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <chrono>
#include <fstream>
#include <sstream>

#include "tta/base/io-util.h"
#include "tta/data/stream.h"
#include "tta/data/synth.h"
#include "tta/embed/toy-encoder.h"
#include "tta/metrics/pesq-plugin.h"
#include "tta/metrics/report.h"
#include "tta/model/checkpoint.h"

namespace tta::harness {

int ExitCodeFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
    case ErrorCode::kStageMismatch:
    case ErrorCode::kEncoderConflict:
    case ErrorCode::kAlignmentError:
    case ErrorCode::kEmptyManifest:
    case ErrorCode::kCorruptFile:
      return 2;
    default:
      return 3;
  }
}

data::SynthCorpus CmdSynth(const DatasetSpec &spec, const fs::path &dir) {
  data::SynthOptions o;
  o.n_utts = spec.n_utts;
  o.seed = spec.seed;
  o.profile = spec.speech;
  o.noise_profile = spec.noise;
  o.out_dir = dir;
  o.min_seconds = spec.min_seconds;
  o.max_seconds = spec.max_seconds;
  return data::GenerateCorpus(o);
}

namespace {

void HoldOut(data::Manifest *m, std::size_t holdout, const std::string &what) {
  if (holdout == 0) return;
  TTA_REQUIRE(holdout < m->records.size(), ErrorCode::kInvalidArgument,
              "hold-out leaves no training data in " + what);
  const std::size_t n_train = m->records.size() - holdout;
  for (std::size_t i = 0; i < m->records.size(); ++i)
    m->records[i].split = i < n_train ? data::Split::kTrain : data::Split::kTest;
}

}  // namespace

data::Manifest CmdMix(const data::BuildManifestOptions &opts,
                      const fs::path &manifest_path, std::size_t holdout) {
  data::Manifest m = data::BuildManifest(opts);
  HoldOut(&m, holdout, manifest_path.string());
  data::SaveManifest(m, manifest_path);
  return m;
}

fs::path PrepareDataset(const DatasetSpec &spec, const fs::path &dir,
                        double snr_lo, double snr_hi, data::Split split,
                        std::size_t holdout) {
  if (!spec.manifest.empty()) {
    TTA_REQUIRE(fs::exists(spec.manifest), ErrorCode::kInvalidArgument,
                "manifest not found: " + spec.manifest.string());
    return spec.manifest;
  }
  const data::SynthCorpus corpus = CmdSynth(spec, dir);
  data::BuildManifestOptions o;
  o.clean_dir = corpus.clean_dir;
  o.noise_dir = corpus.noise_dir;
  o.snr_lo = snr_lo;
  o.snr_hi = snr_hi;
  o.seed = spec.seed;
  o.split = split;
  o.id_prefix = spec.name + "-";
  data::Manifest m = data::BuildManifest(o);
  HoldOut(&m, holdout, spec.name);
  const fs::path path = dir / "manifest.jsonl";
  data::SaveManifest(m, path);
  return path;
}

std::string CmdInitEncoder(std::size_t dim, std::uint64_t seed,
                           const fs::path &path) {
  embed::ToyEncoderConfig cfg;
  cfg.dim = dim;
  cfg.seed = seed;
  embed::ToyEncoder enc = embed::ToyEncoder::Create(cfg);
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  enc.Save(path);
  return enc.spec().encoder_id;
}

std::size_t CmdEmbed(const fs::path &manifest, const fs::path &encoder,
                     const fs::path &cache, const embed::CacheOptions &opts) {
  const data::Manifest m = data::LoadManifest(manifest);
  const embed::ToyEncoder enc = embed::ToyEncoder::Load(encoder);
  if (cache.has_parent_path()) fs::create_directories(cache.parent_path());
  return embed::CacheEmbeddings(m, enc, cache, opts);
}

diet::DietMap CmdFitDiet(const fs::path &cache, const fs::path &out,
                         const diet::FitOptions &opts) {
  const embed::EmbeddingCache c = embed::LoadCache(cache);
  diet::DietMap map = diet::Fit(c, c, opts);
  if (map.rank_deficient)
    spdlog::warn("DIET fit on {} is rank deficient", cache.string());
  if (out.has_parent_path()) fs::create_directories(out.parent_path());
  diet::SaveDiet(map, out);
  return map;
}

std::vector<DietEvalRow> CmdEvalDiet(
    const fs::path &diet_path,
    const std::vector<std::pair<std::string, fs::path>> &caches) {
  TTA_REQUIRE(!caches.empty(), ErrorCode::kInvalidArgument,
              "no target caches to evaluate");
  const diet::DietMap map = diet::LoadDiet(diet_path);
  std::vector<DietEvalRow> rows;
  for (const auto &[name, path] : caches) {
    const embed::EmbeddingCache c = embed::LoadCache(path);
    if (c.encoder_id != map.encoder_id)
      throw Error(ErrorCode::kStageMismatch,
                  "cache " + path.string() + " was embedded with " +
                      c.encoder_id + " but the DIET map was fitted with " +
                      map.encoder_id);
    rows.push_back({name, diet::Evaluate(map, c, c)});
  }
  return rows;
}

std::string FormatDietTable(const std::vector<DietEvalRow> &rows) {
  std::ostringstream os;
  os.setf(std::ios::fixed);
  os.precision(4);
  const int w = 14;
  os << std::string(18, ' ');
  for (const auto &r : rows) {
    std::string name = r.dataset.substr(0, w - 1);
    os << std::string(w - name.size(), ' ') << name;
  }
  os << "\nsim(x', y')       ";
  for (const auto &r : rows) {
    os.width(w);
    os << r.report.mean_sim_noisy;
  }
  os << "\nsim(x', Ay')      ";
  for (const auto &r : rows) {
    os.width(w);
    os << r.report.mean_sim_transformed;
  }
  os << '\n';
  return os.str();
}

nlohmann::json DietTableJson(const std::vector<DietEvalRow> &rows) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto &r : rows)
    j.push_back({{"dataset", r.dataset},
                 {"mean_sim_noisy", r.report.mean_sim_noisy},
                 {"mean_sim_transformed", r.report.mean_sim_transformed},
                 {"count", r.report.count},
                 {"excluded", r.report.excluded}});
  return j;
}

model::TrainReport CmdTrainSource(const fs::path &manifest,
                                  const model::AmConfig &config,
                                  const TrainSettings &train,
                                  const fs::path &checkpoint) {
  const data::Manifest m = data::LoadManifest(manifest);
  const auto train_pairs = data::LoadSplit(m, data::Split::kTrain);
  const auto val_pairs = data::LoadSplit(m, data::Split::kTest);
  TTA_REQUIRE(!train_pairs.empty(), ErrorCode::kEmptyManifest,
              "no training utterances in " + manifest.string());
  model::AmModel am(config);
  model::TrainOptions o;
  o.epochs = train.epochs;
  o.batch_size = train.batch_size;
  o.optimizer.lr = train.lr;
  o.optimizer.weight_decay = train.weight_decay;
  o.seed = train.seed;
  o.segment_samples = static_cast<std::size_t>(
      train.segment_seconds * signal::kDefaultSampleRate);
  o.on_epoch = [](std::size_t epoch, double loss) {
    spdlog::info("source epoch {} loss {:.6g}", epoch + 1, loss);
  };
  model::TrainReport report = model::TrainSource(&am, train_pairs, val_pairs, o);
  if (checkpoint.has_parent_path())
    fs::create_directories(checkpoint.parent_path());
  model::SaveCheckpoint(am, checkpoint,
                        {{"manifest_id", data::ManifestId(manifest)},
                         {"epochs", train.epochs},
                         {"initial_val_mse", report.initial_val_mse},
                         {"final_val_mse", report.final_val_mse},
                         {"steps", report.steps}});
  return report;
}

nlohmann::json RunSummary::ToJson() const {
  nlohmann::json agg = nlohmann::json::object();
  for (const auto &[k, v] : aggregate) agg[k] = v;
  auto opt = [](const std::optional<double> &v) {
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
  };
  return {{"method", method},
          {"dataset", dataset},
          {"seed", seed},
          {"utterances", utterances},
          {"steps", steps},
          {"updates", updates},
          {"skipped", skipped},
          {"aggregate", agg},
          {"l_ld_first_quartile", opt(l_ld_first_quartile)},
          {"l_ld_last_quartile", opt(l_ld_last_quartile)},
          {"manifest_id", manifest_id},
          {"checkpoint_crc", checkpoint_crc},
          {"encoder_id", encoder_id},
          {"timing", {{"wall_seconds", wall_seconds}}}};
}

RunSummary RunSummary::FromJson(const nlohmann::json &j) {
  RunSummary s;
  try {
    s.method = j.at("method").get<std::string>();
    s.dataset = j.at("dataset").get<std::string>();
    s.seed = j.at("seed").get<std::uint64_t>();
    s.utterances = j.value("utterances", std::size_t{0});
    s.steps = j.value("steps", std::size_t{0});
    s.updates = j.value("updates", std::size_t{0});
    s.skipped = j.value("skipped", std::size_t{0});
    for (const auto &[k, v] : j.at("aggregate").items())
      s.aggregate[k] = v.get<double>();
    auto opt = [&](const char *key) -> std::optional<double> {
      if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
      return j.at(key).get<double>();
    };
    s.l_ld_first_quartile = opt("l_ld_first_quartile");
    s.l_ld_last_quartile = opt("l_ld_last_quartile");
    s.manifest_id = j.value("manifest_id", std::string());
    s.checkpoint_crc = j.value("checkpoint_crc", std::string());
    s.encoder_id = j.value("encoder_id", std::string());
    if (j.contains("timing"))
      s.wall_seconds = j.at("timing").value("wall_seconds", 0.0);
  } catch (const nlohmann::json::exception &e) {
    throw Error(ErrorCode::kCorruptFile, std::string("run summary: ") + e.what());
  }
  return s;
}

std::vector<nlohmann::json> ReadLog(const fs::path &path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot read " + path.string());
  std::vector<nlohmann::json> out;
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty()) continue;
    try {
      out.push_back(nlohmann::json::parse(line));
    } catch (const nlohmann::json::exception &e) {
      throw Error(ErrorCode::kCorruptFile,
                  path.string() + ":" + std::to_string(n) + ": " + e.what());
    }
  }
  return out;
}

std::pair<std::optional<double>, std::optional<double>> LatentLossQuartiles(
    const std::vector<nlohmann::json> &log) {
  std::vector<double> v;
  for (const auto &e : log)
    if (e.contains("l_ld") && e.at("l_ld").is_number())
      v.push_back(e.at("l_ld").get<double>());
  if (v.empty()) return {};
  const std::size_t q = std::max<std::size_t>(1, v.size() / 4);
  double first = 0.0, last = 0.0;
  for (std::size_t i = 0; i < q; ++i) {
    first += v[i];
    last += v[v.size() - q + i];
  }
  return {first / q, last / q};
}

namespace {

std::size_t BatchSizeFor(const RunRequest &req) {
  return req.method == engine::Method::kRemixIt ? req.remixit.batch_size : 1;
}

}  // namespace

RunSummary CmdRunTta(const RunRequest &req) {
  const auto t0 = std::chrono::steady_clock::now();
  TTA_REQUIRE(!req.out_dir.empty(), ErrorCode::kInvalidArgument,
              "run needs an output directory");
  const data::Manifest manifest = data::LoadManifest(req.manifest);
  nlohmann::json meta;
  std::unique_ptr<model::SeModel> model =
      model::LoadCheckpoint(req.checkpoint, &meta);

  std::optional<embed::ToyEncoder> encoder;
  std::optional<diet::DietMap> diet_map;
  if (req.method == engine::Method::kLaden) {
    TTA_REQUIRE(!req.encoder.empty() && !req.diet.empty(),
                ErrorCode::kInvalidArgument,
                "LaDen needs an encoder and a DIET map");
    encoder = embed::ToyEncoder::Load(req.encoder);
    diet_map = diet::LoadDiet(req.diet);
    const std::string &run_id = encoder->spec().encoder_id;
    if (diet_map->encoder_id != run_id)
      throw Error(ErrorCode::kStageMismatch,
                  "DIET map " + req.diet.string() + " was fitted on " +
                      diet_map->encoder_id + " embeddings but this run uses " +
                      run_id + "; refit DIET with the run encoder");
  }

  fs::create_directories(req.out_dir);
  data::StreamOrder order = data::MakeStreamOrder(manifest, req.seed);
  data::SaveStreamOrder(order, req.out_dir / "order.json");
  data::UtteranceStream stream(manifest, order, BatchSizeFor(req));

  engine::RunConfig cfg;
  cfg.method = req.method;
  cfg.laden = req.laden;
  cfg.remixit = req.remixit;
  cfg.log_path = req.out_dir / "log.jsonl";
  cfg.resume_dir = req.out_dir / "resume";

  std::optional<engine::ResumeToken> token;
  metrics::MetricReport report;
  const fs::path partial = req.out_dir / "resume" / "metrics.partial.json";
  if (!req.resume.empty()) {
    token = engine::ResumeToken::Load(req.resume);
    if (fs::exists(partial)) report = metrics::MetricReport::Load(partial);
    TTA_REQUIRE(report.count() == token->position, ErrorCode::kStageMismatch,
                "resume token at record " + std::to_string(token->position) +
                    " but " + std::to_string(report.count()) +
                    " outputs were scored before the interruption");
  }

  const metrics::PesqPlugin pesq(req.pesq_command);
  auto sink = [&](const std::vector<data::UtterancePair> &batch,
                  const std::vector<signal::Waveform> &outputs) {
    for (std::size_t i = 0; i < batch.size(); ++i)
      report.Add(metrics::ScoreUtterance(batch[i].record.id, batch[i].clean,
                                         outputs[i], pesq));
  };

  try {
    engine::RunTta(model.get(), &stream, cfg,
                   diet_map ? &*diet_map : nullptr,
                   encoder ? &*encoder : nullptr, sink,
                   token ? &*token : nullptr);
  } catch (...) {
    // Keep only the outputs of committed batches: a failure after the sink
    // ran would otherwise score the replayed batch twice.
    const fs::path token_path = cfg.resume_dir / "resume.json";
    if (fs::exists(token_path)) {
      const std::size_t committed = engine::ResumeToken::Load(token_path).position;
      if (report.count() > committed) {
        metrics::MetricReport kept;
        for (std::size_t i = 0; i < committed; ++i)
          kept.Add(report.per_utterance()[i]);
        report = std::move(kept);
      }
    }
    fs::create_directories(partial.parent_path());
    report.Save(partial);
    throw;
  }
  report.Save(req.out_dir / "metrics.json");
  if (fs::exists(cfg.resume_dir)) fs::remove_all(cfg.resume_dir);

  const auto log = ReadLog(cfg.log_path);
  RunSummary s;
  s.method = engine::MethodName(req.method);
  s.dataset = req.dataset;
  s.seed = req.seed;
  s.utterances = report.count();
  s.steps = log.size();
  for (const auto &e : log) {
    if (e.value("updated", false)) ++s.updates;
    if (e.value("gated", false) || e.value("non_finite", false)) ++s.skipped;
  }
  for (const auto &name : metrics::MetricReport::MetricNames())
    if (auto v = report.Aggregate(name)) s.aggregate[name] = *v;
  std::tie(s.l_ld_first_quartile, s.l_ld_last_quartile) =
      LatentLossQuartiles(log);
  s.manifest_id = data::ManifestId(req.manifest);
  s.checkpoint_crc = FileCrc32Hex(req.checkpoint);
  if (encoder) s.encoder_id = encoder->spec().encoder_id;
  s.wall_seconds = std::chrono::duration<double>(
                       std::chrono::steady_clock::now() - t0)
                       .count();
  WriteTextFile(req.out_dir / "run.json", s.ToJson().dump(2));
  return s;
}

}  // namespace tta::harness
