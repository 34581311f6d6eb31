// include/tta/base/tensor.h

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

#ifndef TTA_BASE_TENSOR_H_
#define TTA_BASE_TENSOR_H_

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace tta {

/// Dense row-major array of doubles with a small runtime shape.  Rank-2 is
/// the common case (time x feature grids); rank-1 holds vectors and biases,
/// rank-3 holds channel stacks for the 2-D convolution.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(std::vector<std::size_t> shape, double fill = 0.0);
  Tensor(std::vector<std::size_t> shape, std::vector<double> data);

  static Tensor Vector(std::vector<double> data);
  static Tensor Scalar(double v) { return Tensor({1}, {v}); }

  const std::vector<std::size_t> &shape() const { return shape_; }
  std::size_t rank() const { return shape_.size(); }
  std::size_t dim(std::size_t i) const { return shape_[i]; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  std::size_t rows() const { return shape_[0]; }
  std::size_t cols() const { return shape_.size() > 1 ? shape_[1] : 1; }

  double *data() { return data_.data(); }
  const double *data() const { return data_.data(); }
  std::span<double> values() { return data_; }
  std::span<const double> values() const { return data_; }
  std::vector<double> &storage() { return data_; }
  const std::vector<double> &storage() const { return data_; }

  double &operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }
  double &at(std::size_t r, std::size_t c) { return data_[r * shape_[1] + c]; }
  double at(std::size_t r, std::size_t c) const {
    return data_[r * shape_[1] + c];
  }

  /// Reinterprets the storage; element count must be preserved.
  Tensor Reshaped(std::vector<std::size_t> shape) const;
  void Fill(double v);
  bool SameShape(const Tensor &o) const { return shape_ == o.shape_; }
  std::string ShapeString() const;

  double SquaredNorm() const;

 private:
  std::vector<std::size_t> shape_;
  std::vector<double> data_;
};

std::size_t ShapeSize(const std::vector<std::size_t> &shape);

}  // namespace tta

#endif  // TTA_BASE_TENSOR_H_
