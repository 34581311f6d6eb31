// include/tta/model/optimizer.h

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

#ifndef TTA_MODEL_OPTIMIZER_H_
#define TTA_MODEL_OPTIMIZER_H_

#include <cstddef>
#include <filesystem>
#include <vector>

#include "tta/model/params.h"

namespace tta::model {

struct AdamWOptions {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double weight_decay = 0.01;
};

/// Adam with decoupled weight decay.  Only parameters selected by `mask`
/// are ever written; the rest are left bitwise untouched.
class AdamW {
 public:
  AdamW(const ParamSet &params, std::vector<bool> mask,
        const AdamWOptions &opts);

  void Step(ParamSet *params, const std::vector<Tensor> &grads);

  std::size_t steps() const { return t_; }
  const AdamWOptions &options() const { return opts_; }

  /// Step count and moment estimates, for resuming an interrupted run.
  /// Load requires an optimizer built over the same parameter shapes and
  /// mask; anything else is a corrupt-file error.
  void SaveState(const std::filesystem::path &path) const;
  void LoadState(const std::filesystem::path &path);

 private:
  std::vector<bool> mask_;
  AdamWOptions opts_;
  std::vector<Tensor> m_, v_;
  std::size_t t_ = 0;
};

}  // namespace tta::model

#endif  // TTA_MODEL_OPTIMIZER_H_
