// src/base/tensor.cc

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

#include "tta/base/tensor.h"

#include <algorithm>
#include <sstream>

#include "tta/base/error.h"

namespace tta {

std::size_t ShapeSize(const std::vector<std::size_t> &shape) {
  std::size_t n = 1;
  for (std::size_t d : shape) n *= d;
  return n;
}

Tensor::Tensor(std::vector<std::size_t> shape, double fill)
    : shape_(std::move(shape)), data_(ShapeSize(shape_), fill) {}

Tensor::Tensor(std::vector<std::size_t> shape, std::vector<double> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  TTA_REQUIRE(ShapeSize(shape_) == data_.size(), ErrorCode::kInvalidArgument,
              "tensor data does not match shape " + ShapeString());
}

Tensor Tensor::Vector(std::vector<double> data) {
  std::size_t n = data.size();
  return Tensor({n}, std::move(data));
}

Tensor Tensor::Reshaped(std::vector<std::size_t> shape) const {
  TTA_REQUIRE(ShapeSize(shape) == data_.size(), ErrorCode::kInvalidArgument,
              "reshape changes element count");
  return Tensor(std::move(shape), data_);
}

void Tensor::Fill(double v) { std::fill(data_.begin(), data_.end(), v); }

std::string Tensor::ShapeString() const {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < shape_.size(); ++i) {
    if (i) os << 'x';
    os << shape_[i];
  }
  os << ']';
  return os.str();
}

double Tensor::SquaredNorm() const {
  double s = 0.0;
  for (double v : data_) s += v * v;
  return s;
}

}  // namespace tta
