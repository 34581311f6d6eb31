// src/engine/run.cc

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

#include "tta/engine/run.h"

#include <chrono>
#include <fstream>
#include <memory>
#include <spdlog/spdlog.h>
#include <sstream>

#include "tta/base/error.h"
#include "tta/base/io-util.h"
#include "tta/model/checkpoint.h"

namespace tta::engine {
namespace {

nlohmann::json OptionalJson(const std::optional<double> &v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

void CopyParams(const model::SeModel &from, model::SeModel *to) {
  to->params().SetValues(from.params().Values());
}

// Values of the masked parameters, for rolling back a failed step.
std::vector<Tensor> Masked(const model::SeModel &m, const std::vector<bool> &mask) {
  std::vector<Tensor> out;
  for (std::size_t i = 0; i < mask.size(); ++i)
    if (mask[i]) out.push_back(m.params()[i].value);
  return out;
}

void Restore(const std::vector<Tensor> &values, const std::vector<bool> &mask,
             model::SeModel *m) {
  std::size_t k = 0;
  for (std::size_t i = 0; i < mask.size(); ++i)
    if (mask[i]) m->params()[i].value = values[k++];
}

struct Committed {
  std::vector<Tensor> student, teacher;
  std::optional<model::AdamW> optimizer;
  std::size_t step = 0, updates = 0, skipped = 0;
  std::string rng;
};

}  // namespace

const char *MethodName(Method m) {
  switch (m) {
    case Method::kLaden:
      return "laden";
    case Method::kRemixIt:
      return "remixit";
    case Method::kSourceOnly:
      return "source_only";
  }
  return "?";
}

Method ParseMethod(const std::string &s) {
  if (s == "laden") return Method::kLaden;
  if (s == "remixit") return Method::kRemixIt;
  if (s == "source_only") return Method::kSourceOnly;
  throw Error(ErrorCode::kInvalidArgument, "unknown method: " + s);
}

nlohmann::json StepLog::ToJson() const {
  nlohmann::json j = {{"step", step},
                      {"utterance_ids", utterance_ids},
                      {"l_ld", OptionalJson(l_ld)},
                      {"l_r", OptionalJson(l_r)},
                      {"gated", gated},
                      {"wall_ms", wall_ms}};
  if (mse) j["mse"] = *mse;
  if (teacher_updated) j["teacher_updated"] = true;
  if (non_finite) j["non_finite"] = true;
  j["updated"] = updated;
  return j;
}

nlohmann::json ResumeToken::ToJson() const {
  return {{"position", position},     {"step", step},
          {"updates", updates},       {"skipped", skipped},
          {"checkpoint", checkpoint}, {"optimizer_state", optimizer_state},
          {"teacher_checkpoint", teacher_checkpoint}, {"rng_state", rng_state}};
}

ResumeToken ResumeToken::FromJson(const nlohmann::json &j) {
  ResumeToken t;
  try {
    t.position = j.at("position").get<std::size_t>();
    t.step = j.at("step").get<std::size_t>();
    t.updates = j.value("updates", std::size_t{0});
    t.skipped = j.value("skipped", std::size_t{0});
    t.checkpoint = j.at("checkpoint").get<std::string>();
    t.optimizer_state = j.value("optimizer_state", std::string());
    t.teacher_checkpoint = j.value("teacher_checkpoint", std::string());
    t.rng_state = j.value("rng_state", std::string());
  } catch (const nlohmann::json::exception &e) {
    throw Error(ErrorCode::kCorruptFile, std::string("resume token: ") + e.what());
  }
  return t;
}

ResumeToken ResumeToken::Load(const std::filesystem::path &path) {
  try {
    return FromJson(nlohmann::json::parse(ReadTextFile(path)));
  } catch (const nlohmann::json::exception &e) {
    throw Error(ErrorCode::kCorruptFile, path.string() + ": " + e.what());
  }
}

RunResult RunTta(model::SeModel *model, data::UtteranceStream *stream,
                 const RunConfig &cfg, const diet::DietMap *diet,
                 const embed::Encoder *encoder, const OutputSink &sink,
                 const ResumeToken *resume) {
  const bool laden = cfg.method == Method::kLaden;
  const bool remixit = cfg.method == Method::kRemixIt;
  if (laden) {
    cfg.laden.Validate();
    TTA_REQUIRE(diet && encoder, ErrorCode::kInvalidArgument,
                "LaDen needs a DIET map and an encoder");
    TTA_REQUIRE(diet->dim() == encoder->spec().dim,
                ErrorCode::kInvalidArgument,
                "DIET map and encoder differ in dimension");
    if (!diet->encoder_id.empty() &&
        diet->encoder_id != encoder->spec().encoder_id)
      throw Error(ErrorCode::kEncoderConflict,
                  "DIET map fitted for " + diet->encoder_id + ", encoder is " +
                      encoder->spec().encoder_id);
  }
  if (remixit) cfg.remixit.Validate();

  model::AdamWOptions opt;
  opt.lr = remixit ? cfg.remixit.lr : cfg.laden.lr;
  opt.weight_decay = remixit ? cfg.remixit.weight_decay : cfg.laden.weight_decay;
  AdaptState state(*model, opt);  // snapshot of the source weights
  std::unique_ptr<model::SeModel> teacher;
  if (remixit) teacher = model->Clone();
  std::mt19937_64 rng(cfg.remixit.seed);

  if (resume) {
    CopyParams(*model::LoadCheckpoint(resume->checkpoint), model);
    if (!resume->optimizer_state.empty())
      state.optimizer().LoadState(resume->optimizer_state);
    if (remixit) {
      CopyParams(*model::LoadCheckpoint(resume->teacher_checkpoint),
                 teacher.get());
      std::istringstream(resume->rng_state) >> rng;
    }
    stream->Seek(resume->position);
    state.step = resume->step;
    state.updates = resume->updates;
    state.skipped = resume->skipped;
  }

  std::ofstream log_out;
  if (!cfg.log_path.empty()) {
    if (cfg.log_path.has_parent_path())
      std::filesystem::create_directories(cfg.log_path.parent_path());
    log_out.open(cfg.log_path, resume ? std::ios::app : std::ios::trunc);
    if (!log_out)
      throw Error(ErrorCode::kIo, "cannot write " + cfg.log_path.string());
  }

  RunResult result;
  std::vector<data::UtterancePair> batch;
  Committed committed;
  for (;;) {
    const std::size_t position = stream->position();
    // A batch is committed once its outputs reach the sink and the log.  On
    // failure the state rolls back to the last committed batch so that the
    // resume token replays the failed one from the weights that preceded it.
    committed.student = Masked(*model, state.mask());
    committed.optimizer = state.optimizer();
    if (remixit) {
      committed.teacher = Masked(*teacher, state.mask());
      std::ostringstream os;
      os << rng;
      committed.rng = os.str();
    }
    committed.step = state.step;
    committed.updates = state.updates;
    committed.skipped = state.skipped;
    try {
      if (!stream->Next(&batch)) break;
      const auto t0 = std::chrono::steady_clock::now();
      std::vector<data::NoisyUtterance> noisy = data::NoisyView(batch);
      StepLog entry;
      for (const auto &u : noisy) entry.utterance_ids.push_back(u.id);
      std::vector<signal::Waveform> outputs;
      if (laden) {
        std::vector<LadenInput> inputs;
        for (const auto &u : noisy)
          inputs.push_back(PrepareLadenInput(u, *diet, *encoder, cfg.laden));
        StepResult r = LadenStep(model, &state, inputs, *encoder, cfg.laden);
        outputs = std::move(r.outputs);
        entry.l_ld = r.l_ld;
        entry.l_r = r.l_r;
        entry.gated = r.gated;
        entry.updated = r.updated;
        entry.non_finite = r.non_finite;
      } else if (remixit) {
        RemixItStepResult r = RemixItStep(model, teacher.get(), &state, noisy,
                                          rng, cfg.remixit);
        outputs = std::move(r.outputs);
        entry.mse = r.loss;
        entry.updated = !r.non_finite;
        entry.teacher_updated = r.teacher_updated;
        entry.non_finite = r.non_finite;
      } else {
        for (const auto &u : noisy) outputs.push_back(model->Enhance(u.noisy));
        ++state.step;
      }
      entry.step = state.step;
      entry.wall_ms = std::chrono::duration<double, std::milli>(
                          std::chrono::steady_clock::now() - t0)
                          .count();
      if (sink) sink(batch, outputs);
      if (log_out.is_open()) log_out << entry.ToJson().dump() << '\n' << std::flush;
      result.log.push_back(std::move(entry));
    } catch (const std::exception &e) {
      Restore(committed.student, state.mask(), model);
      state.optimizer() = *committed.optimizer;
      if (remixit) Restore(committed.teacher, state.mask(), teacher.get());
      state.step = committed.step;
      state.updates = committed.updates;
      state.skipped = committed.skipped;
      if (!cfg.resume_dir.empty()) {
        ResumeToken token;
        token.position = position;
        token.step = state.step;
        token.updates = state.updates;
        token.skipped = state.skipped;
        token.checkpoint = (cfg.resume_dir / "state.ckpt").string();
        model::SaveCheckpoint(*model, token.checkpoint);
        if (cfg.method != Method::kSourceOnly) {
          token.optimizer_state = (cfg.resume_dir / "optimizer.bin").string();
          state.optimizer().SaveState(token.optimizer_state);
        }
        if (remixit) {
          token.teacher_checkpoint = (cfg.resume_dir / "teacher.ckpt").string();
          model::SaveCheckpoint(*teacher, token.teacher_checkpoint);
          token.rng_state = committed.rng;
        }
        WriteTextFile(cfg.resume_dir / "resume.json", token.ToJson().dump(2));
        spdlog::error("run interrupted at record {}: {}; resume token in {}",
                      position, e.what(),
                      (cfg.resume_dir / "resume.json").string());
      }
      throw;
    }
  }
  result.steps = state.step;
  result.updates = state.updates;
  result.skipped = state.skipped;
  return result;
}

}  // namespace tta::engine
