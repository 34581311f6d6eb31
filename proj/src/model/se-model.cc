// src/model/se-model.cc

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

#include "tta/model/se-model.h"

namespace tta::model {

signal::Waveform SeModel::Enhance(const signal::Waveform &noisy) const {
  ad::Tape tape(/*grad_enabled=*/false);
  BoundParams p(tape, params_);
  ad::Var out = Forward(p, noisy);
  return signal::Waveform{out.value().storage(), noisy.sample_rate};
}

ParamPartition PartitionParams(const SeModel &model) {
  ParamPartition part;
  part.mask = model.AdaptableMask();
  const ParamSet &ps = model.params();
  for (std::size_t i = 0; i < ps.size(); ++i)
    (part.mask[i] ? part.adaptable : part.frozen).push_back(ps[i].name);
  part.adaptable_count = ps.Count(part.mask);
  part.total_count = ps.Count();
  return part;
}

}  // namespace tta::model
