// include/tta/engine/run.h

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

#ifndef TTA_ENGINE_RUN_H_
#define TTA_ENGINE_RUN_H_

#include <cstddef>
#include <filesystem>
#include <functional>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "tta/data/stream.h"
#include "tta/diet/diet.h"
#include "tta/embed/encoder.h"
#include "tta/engine/adapt.h"
#include "tta/model/se-model.h"

namespace tta::engine {

enum class Method { kLaden, kRemixIt, kSourceOnly };
const char *MethodName(Method m);
Method ParseMethod(const std::string &s);

/// One line of the adaptation log.
struct StepLog {
  std::size_t step = 0;
  std::vector<std::string> utterance_ids;
  std::optional<double> l_ld;  // LaDen only
  std::optional<double> l_r;
  std::optional<double> mse;  // RemixIT student loss
  bool gated = false;
  bool updated = false;
  bool teacher_updated = false;
  bool non_finite = false;
  double wall_ms = 0.0;

  nlohmann::json ToJson() const;
};

struct RunConfig {
  Method method = Method::kLaden;
  LadenConfig laden;
  RemixItConfig remixit;
  std::filesystem::path log_path;    // JSON lines; not written when empty
  std::filesystem::path resume_dir;  // state dumped here on failure
};

/// Where to continue an interrupted run.
struct ResumeToken {
  std::size_t position = 0;  // records consumed from the stream
  std::size_t step = 0;
  std::size_t updates = 0;
  std::size_t skipped = 0;
  std::string checkpoint;          // adapted model parameters
  std::string optimizer_state;     // moments of the adaptation optimizer
  std::string teacher_checkpoint;  // RemixIT only
  std::string rng_state;           // RemixIT only

  nlohmann::json ToJson() const;
  static ResumeToken FromJson(const nlohmann::json &j);
  static ResumeToken Load(const std::filesystem::path &path);
};

struct RunResult {
  std::vector<StepLog> log;
  std::size_t steps = 0;
  std::size_t updates = 0;
  std::size_t skipped = 0;
};

/// Receives each batch with the enhanced outputs emitted for it.  The
/// clean references in `batch` are for scoring only; adaptation never sees
/// them.
using OutputSink =
    std::function<void(const std::vector<data::UtterancePair> &batch,
                       const std::vector<signal::Waveform> &outputs)>;

/// Single online pass over the stream, adapting `model` in place and
/// emitting an enhancement for every utterance.  diet and encoder are
/// required for LaDen.  On a failure the log written so far is kept, the
/// state is saved under cfg.resume_dir with resume.json, and the error is
/// rethrown.
RunResult RunTta(model::SeModel *model, data::UtteranceStream *stream,
                 const RunConfig &cfg, const diet::DietMap *diet,
                 const embed::Encoder *encoder, const OutputSink &sink,
                 const ResumeToken *resume = nullptr);

}  // namespace tta::engine

#endif  // TTA_ENGINE_RUN_H_
