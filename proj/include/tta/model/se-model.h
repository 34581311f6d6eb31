// include/tta/model/se-model.h

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

#ifndef TTA_MODEL_SE_MODEL_H_
#define TTA_MODEL_SE_MODEL_H_

#include <memory>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "tta/model/params.h"
#include "tta/signal/waveform.h"

namespace tta::model {

/// Waveform-to-waveform enhancement network.  Other architectures plug in
/// by implementing Forward() and AdaptableMask().
class SeModel {
 public:
  virtual ~SeModel() = default;

  virtual std::string Kind() const = 0;
  virtual nlohmann::json ConfigJson() const = 0;
  virtual std::unique_ptr<SeModel> Clone() const = 0;

  /// Enhanced waveform, same length as `noisy`, as a function of the bound
  /// parameters.  The input itself is treated as a constant.
  virtual ad::Var Forward(const BoundParams &p,
                          const signal::Waveform &noisy) const = 0;

  /// Per parameter: true when test-time adaptation may update it.
  virtual std::vector<bool> AdaptableMask() const = 0;

  /// Inference without gradients.
  signal::Waveform Enhance(const signal::Waveform &noisy) const;

  ParamSet &params() { return params_; }
  const ParamSet &params() const { return params_; }

 protected:
  ParamSet params_;
};

ParamPartition PartitionParams(const SeModel &model);

}  // namespace tta::model

#endif  // TTA_MODEL_SE_MODEL_H_
