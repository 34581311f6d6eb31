// include/tta/model/params.h

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

#ifndef TTA_MODEL_PARAMS_H_
#define TTA_MODEL_PARAMS_H_

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "tta/autodiff/tape.h"
#include "tta/base/tensor.h"

namespace tta::model {

struct Parameter {
  std::string name;
  Tensor value;
};

/// Ordered, named parameter collection.  Order is the order of Add() calls
/// and is part of the checkpoint format.
class ParamSet {
 public:
  std::size_t Add(std::string name, Tensor value);

  std::size_t size() const { return params_.size(); }
  Parameter &operator[](std::size_t i) { return params_[i]; }
  const Parameter &operator[](std::size_t i) const { return params_[i]; }
  /// Index of `name`; throws invalid-argument when absent.
  std::size_t Index(const std::string &name) const;
  bool Contains(const std::string &name) const;

  /// Total number of scalars.
  std::size_t Count() const;
  std::size_t Count(const std::vector<bool> &mask) const;

  /// CRC over the values of the selected parameters (all when mask empty).
  std::string Checksum(const std::vector<bool> &mask = {}) const;

  std::vector<Tensor> Values() const;
  void SetValues(const std::vector<Tensor> &values);

 private:
  std::vector<Parameter> params_;
  std::map<std::string, std::size_t> index_;
};

/// Parameters placed on a tape for one forward pass.  Trainable entries
/// become variables, the rest constants.
class BoundParams {
 public:
  BoundParams(ad::Tape &tape, const ParamSet &params,
              const std::vector<bool> &trainable);
  /// All constants.
  BoundParams(ad::Tape &tape, const ParamSet &params);

  const ad::Var &operator[](std::size_t i) const { return vars_[i]; }
  std::size_t size() const { return vars_.size(); }
  ad::Tape &tape() const { return *tape_; }

  /// Gradients after tape.Backward(); zero tensors for constants.
  std::vector<Tensor> Grads() const;

 private:
  ad::Tape *tape_;
  std::vector<ad::Var> vars_;
};

/// Named split of a model's parameters into the test-time adaptable set and
/// its frozen complement.
struct ParamPartition {
  std::vector<std::string> adaptable;
  std::vector<std::string> frozen;
  std::vector<bool> mask;  // per parameter index, true when adaptable
  std::size_t adaptable_count = 0;
  std::size_t total_count = 0;
};

}  // namespace tta::model

#endif  // TTA_MODEL_PARAMS_H_
