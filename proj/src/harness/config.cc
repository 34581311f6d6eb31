// src/harness/config.cc

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

#include "tta/harness/config.h"

#include <algorithm>

#include "tta/base/error.h"
#include "tta/base/io-util.h"

namespace tta::harness {
namespace {

nlohmann::json DatasetJson(const DatasetSpec &d) {
  nlohmann::json j = {{"name", d.name},
                      {"speech", data::ProfileName(d.speech)},
                      {"n_utts", d.n_utts},
                      {"seed", d.seed},
                      {"min_seconds", d.min_seconds},
                      {"max_seconds", d.max_seconds}};
  j["manifest"] = d.manifest.string();
  j["noise"] = d.noise ? nlohmann::json(data::ProfileName(*d.noise))
                       : nlohmann::json(nullptr);
  return j;
}

DatasetSpec DatasetFromJson(const nlohmann::json &j) {
  DatasetSpec d;
  d.name = j.at("name").get<std::string>();
  d.speech = data::ParseProfile(j.value("speech", std::string("source")));
  if (j.contains("noise") && !j.at("noise").is_null())
    d.noise = data::ParseProfile(j.at("noise").get<std::string>());
  d.n_utts = j.value("n_utts", d.n_utts);
  d.seed = j.value("seed", d.seed);
  d.min_seconds = j.value("min_seconds", d.min_seconds);
  d.max_seconds = j.value("max_seconds", d.max_seconds);
  d.manifest = j.value("manifest", std::string());
  return d;
}

}  // namespace

void ExperimentConfig::Validate() const {
  TTA_REQUIRE(!seeds.empty(), ErrorCode::kInvalidArgument,
              "at least one seed is required");
  TTA_REQUIRE(!methods.empty(), ErrorCode::kInvalidArgument,
              "at least one method is required");
  TTA_REQUIRE(!targets.empty(), ErrorCode::kInvalidArgument,
              "at least one target dataset is required");
  TTA_REQUIRE(snr_lo <= snr_hi, ErrorCode::kInvalidArgument,
              "SNR range is empty");
  TTA_REQUIRE(encoder_dim >= 1, ErrorCode::kInvalidArgument,
              "encoder dimension must be positive");
  TTA_REQUIRE(source.n_utts > train.validation_utts,
              ErrorCode::kInvalidArgument,
              "source dataset must be larger than the validation hold-out");
  TTA_REQUIRE(diet_ridge >= 0.0, ErrorCode::kInvalidArgument,
              "ridge must be non-negative");
  model.Validate();
  laden.Validate();
  remixit.Validate();
  auto check_dataset = [](const DatasetSpec &d) {
    TTA_REQUIRE(!d.name.empty(), ErrorCode::kInvalidArgument,
                "dataset without a name");
    TTA_REQUIRE(d.manifest.empty() || std::filesystem::exists(d.manifest),
                ErrorCode::kInvalidArgument,
                "manifest for " + d.name + " not found: " + d.manifest.string());
    TTA_REQUIRE(d.min_seconds > 0 && d.min_seconds <= d.max_seconds,
                ErrorCode::kInvalidArgument,
                "bad utterance length range for " + d.name);
  };
  check_dataset(source);
  std::vector<std::string> names = {source.name};
  for (const auto &t : targets) {
    TTA_REQUIRE(std::find(names.begin(), names.end(), t.name) == names.end(),
                ErrorCode::kInvalidArgument, "duplicate dataset name " + t.name);
    check_dataset(t);
    TTA_REQUIRE(t.n_utts >= 1, ErrorCode::kInvalidArgument,
                "dataset " + t.name + " is empty");
    names.push_back(t.name);
  }
}

nlohmann::json ToJson(const ExperimentConfig &c) {
  nlohmann::json methods = nlohmann::json::array();
  for (auto m : c.methods) methods.push_back(engine::MethodName(m));
  nlohmann::json targets = nlohmann::json::array();
  for (const auto &t : c.targets) targets.push_back(DatasetJson(t));
  const auto &l = c.laden;
  const auto &r = c.remixit;
  return {
      {"name", c.name},
      {"output_dir", c.output_dir.string()},
      {"seeds", c.seeds},
      {"methods", methods},
      {"source", DatasetJson(c.source)},
      {"targets", targets},
      {"snr_lo", c.snr_lo},
      {"snr_hi", c.snr_hi},
      {"encoder", {{"dim", c.encoder_dim}, {"seed", c.encoder_seed}}},
      {"diet", {{"ridge", c.diet_ridge}}},
      {"model", model::ToJson(c.model)},
      {"train",
       {{"epochs", c.train.epochs},
        {"batch_size", c.train.batch_size},
        {"lr", c.train.lr},
        {"weight_decay", c.train.weight_decay},
        {"segment_seconds", c.train.segment_seconds},
        {"validation_utts", c.train.validation_utts},
        {"seed", c.train.seed}}},
      {"laden",
       {{"lambda", l.lambda},
        {"gamma", l.gamma},
        {"tau", l.tau},
        {"beta", l.beta},
        {"lr", l.lr},
        {"weight_decay", l.weight_decay},
        {"frame_len", l.frame_len},
        {"hop", l.hop}}},
      {"remixit",
       {{"batch_size", r.batch_size},
        {"teacher_update_every", r.teacher_update_every},
        {"teacher_momentum", r.teacher_momentum},
        {"lr", r.lr},
        {"weight_decay", r.weight_decay}}},
      {"pesq_command", c.pesq_command}};
}

ExperimentConfig ConfigFromJson(const nlohmann::json &j) {
  ExperimentConfig c;
  try {
    c.name = j.value("name", c.name);
    c.output_dir = j.value("output_dir", c.output_dir.string());
    c.seeds = j.value("seeds", c.seeds);
    if (j.contains("methods")) {
      c.methods.clear();
      for (const auto &m : j.at("methods"))
        c.methods.push_back(engine::ParseMethod(m.get<std::string>()));
    }
    if (j.contains("source")) c.source = DatasetFromJson(j.at("source"));
    for (const auto &t : j.value("targets", nlohmann::json::array()))
      c.targets.push_back(DatasetFromJson(t));
    c.snr_lo = j.value("snr_lo", c.snr_lo);
    c.snr_hi = j.value("snr_hi", c.snr_hi);
    if (j.contains("encoder")) {
      c.encoder_dim = j.at("encoder").value("dim", c.encoder_dim);
      c.encoder_seed = j.at("encoder").value("seed", c.encoder_seed);
    }
    if (j.contains("diet")) c.diet_ridge = j.at("diet").value("ridge", 0.0);
    if (j.contains("model")) c.model = model::AmConfigFromJson(j.at("model"));
    if (j.contains("train")) {
      const auto &t = j.at("train");
      c.train.epochs = t.value("epochs", c.train.epochs);
      c.train.batch_size = t.value("batch_size", c.train.batch_size);
      c.train.lr = t.value("lr", c.train.lr);
      c.train.weight_decay = t.value("weight_decay", c.train.weight_decay);
      c.train.segment_seconds =
          t.value("segment_seconds", c.train.segment_seconds);
      c.train.validation_utts =
          t.value("validation_utts", c.train.validation_utts);
      c.train.seed = t.value("seed", c.train.seed);
    }
    if (j.contains("laden")) {
      const auto &l = j.at("laden");
      auto &o = c.laden;
      o.lambda = l.value("lambda", o.lambda);
      o.gamma = l.value("gamma", o.gamma);
      o.tau = l.value("tau", o.tau);
      o.beta = l.value("beta", o.beta);
      o.lr = l.value("lr", o.lr);
      o.weight_decay = l.value("weight_decay", o.weight_decay);
      o.frame_len = l.value("frame_len", o.frame_len);
      o.hop = l.value("hop", o.hop);
    }
    if (j.contains("remixit")) {
      const auto &r = j.at("remixit");
      auto &o = c.remixit;
      o.batch_size = r.value("batch_size", o.batch_size);
      o.teacher_update_every =
          r.value("teacher_update_every", o.teacher_update_every);
      o.teacher_momentum = r.value("teacher_momentum", o.teacher_momentum);
      o.lr = r.value("lr", o.lr);
      o.weight_decay = r.value("weight_decay", o.weight_decay);
    }
    c.pesq_command = j.value("pesq_command", c.pesq_command);
  } catch (const nlohmann::json::exception &e) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string("experiment config: ") + e.what());
  }
  c.Validate();
  return c;
}

ExperimentConfig LoadConfig(const std::filesystem::path &path) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(ReadTextFile(path));
  } catch (const nlohmann::json::exception &e) {
    throw Error(ErrorCode::kInvalidArgument, path.string() + ": " + e.what());
  }
  return ConfigFromJson(j);
}

void ApplyOverride(nlohmann::json *doc, const std::string &assignment) {
  const auto eq = assignment.find('=');
  TTA_REQUIRE(eq != std::string::npos && eq > 0, ErrorCode::kInvalidArgument,
              "override must look like key.path=value: " + assignment);
  const std::string key = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  nlohmann::json value =
      nlohmann::json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (value.is_discarded()) value = text;
  nlohmann::json::json_pointer ptr;
  std::size_t start = 0;
  for (;;) {
    const auto dot = key.find('.', start);
    const std::string part = key.substr(start, dot - start);
    TTA_REQUIRE(!part.empty(), ErrorCode::kInvalidArgument,
                "empty component in override key " + key);
    ptr /= part;
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  (*doc)[ptr] = value;
}

}  // namespace tta::harness
