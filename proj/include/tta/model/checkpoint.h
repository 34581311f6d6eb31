// include/tta/model/checkpoint.h

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

#ifndef TTA_MODEL_CHECKPOINT_H_
#define TTA_MODEL_CHECKPOINT_H_

#include <filesystem>
#include <memory>
#include <nlohmann/json.hpp>
#include <string>

#include "tta/model/se-model.h"

namespace tta::model {

/// Builds an untrained model of the given kind ("am") from its config.
std::unique_ptr<SeModel> MakeModel(const std::string &kind,
                                   const nlohmann::json &config);

/// Layout: 8-byte magic, length-prefixed JSON header {kind, config, meta,
/// params: [{name, shape, crc32}]}, then each tensor as little-endian
/// doubles in header order.
void SaveCheckpoint(const SeModel &model, const std::filesystem::path &path,
                    const nlohmann::json &meta = nlohmann::json::object());

/// Rebuilds the model and loads its parameters.  Truncation, trailing bytes
/// or a per-tensor checksum mismatch raise corrupt-file.
std::unique_ptr<SeModel> LoadCheckpoint(const std::filesystem::path &path,
                                        nlohmann::json *meta = nullptr);

}  // namespace tta::model

#endif  // TTA_MODEL_CHECKPOINT_H_
