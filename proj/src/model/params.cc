// src/model/params.cc

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

#include "tta/model/params.h"

#include "tta/base/error.h"
#include "tta/base/io-util.h"

namespace tta::model {

std::size_t ParamSet::Add(std::string name, Tensor value) {
  TTA_REQUIRE(!index_.count(name), ErrorCode::kInvalidArgument,
              "duplicate parameter " + name);
  index_[name] = params_.size();
  params_.push_back({std::move(name), std::move(value)});
  return params_.size() - 1;
}

std::size_t ParamSet::Index(const std::string &name) const {
  auto it = index_.find(name);
  TTA_REQUIRE(it != index_.end(), ErrorCode::kInvalidArgument,
              "no parameter named " + name);
  return it->second;
}

bool ParamSet::Contains(const std::string &name) const {
  return index_.count(name) > 0;
}

std::size_t ParamSet::Count() const {
  std::size_t n = 0;
  for (const auto &p : params_) n += p.value.size();
  return n;
}

std::size_t ParamSet::Count(const std::vector<bool> &mask) const {
  TTA_REQUIRE(mask.size() == params_.size(), ErrorCode::kInvalidArgument,
              "mask size mismatch");
  std::size_t n = 0;
  for (std::size_t i = 0; i < params_.size(); ++i)
    if (mask[i]) n += params_[i].value.size();
  return n;
}

std::string ParamSet::Checksum(const std::vector<bool> &mask) const {
  TTA_REQUIRE(mask.empty() || mask.size() == params_.size(),
              ErrorCode::kInvalidArgument, "mask size mismatch");
  std::uint32_t crc = 0;
  for (std::size_t i = 0; i < params_.size(); ++i)
    if (mask.empty() || mask[i]) crc = Crc32(params_[i].value.values(), crc);
  return Crc32Hex(crc);
}

std::vector<Tensor> ParamSet::Values() const {
  std::vector<Tensor> out;
  out.reserve(params_.size());
  for (const auto &p : params_) out.push_back(p.value);
  return out;
}

void ParamSet::SetValues(const std::vector<Tensor> &values) {
  TTA_REQUIRE(values.size() == params_.size(), ErrorCode::kInvalidArgument,
              "parameter count mismatch");
  for (std::size_t i = 0; i < values.size(); ++i) {
    TTA_REQUIRE(values[i].SameShape(params_[i].value),
                ErrorCode::kInvalidArgument,
                "shape mismatch for " + params_[i].name);
    params_[i].value = values[i];
  }
}

BoundParams::BoundParams(ad::Tape &tape, const ParamSet &params,
                         const std::vector<bool> &trainable)
    : tape_(&tape) {
  TTA_REQUIRE(trainable.size() == params.size(), ErrorCode::kInvalidArgument,
              "trainable mask size mismatch");
  vars_.reserve(params.size());
  for (std::size_t i = 0; i < params.size(); ++i)
    vars_.push_back(trainable[i] ? tape.Variable(params[i].value)
                                 : tape.Constant(params[i].value));
}

BoundParams::BoundParams(ad::Tape &tape, const ParamSet &params)
    : BoundParams(tape, params, std::vector<bool>(params.size(), false)) {}

std::vector<Tensor> BoundParams::Grads() const {
  std::vector<Tensor> out;
  out.reserve(vars_.size());
  for (const auto &v : vars_) out.push_back(tape_->Grad(v));
  return out;
}

}  // namespace tta::model
