// include/tta/autodiff/tape.h

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

#ifndef TTA_AUTODIFF_TAPE_H_
#define TTA_AUTODIFF_TAPE_H_

#include <cstddef>
#include <deque>
#include <functional>
#include <span>
#include <vector>

#include "tta/base/tensor.h"

namespace tta::ad {

class Tape;

/// Handle to a value recorded on a Tape.  Cheap to copy; valid as long as
/// the owning tape is alive.
class Var {
 public:
  Var() = default;
  const Tensor &value() const;
  bool requires_grad() const;
  bool valid() const { return tape_ != nullptr; }
  Tape *tape() const { return tape_; }
  std::size_t id() const { return id_; }

 private:
  friend class Tape;
  Var(Tape *tape, std::size_t id) : tape_(tape), id_(id) {}
  Tape *tape_ = nullptr;
  std::size_t id_ = 0;
};

/// Receives the node's own value and the gradient of its output, and
/// accumulates into the gradients of its parents.  parent_grads[i] is null
/// when parent i does not require a gradient.
using BackwardFn =
    std::function<void(const Tensor &value, const Tensor &grad_out,
                       std::span<Tensor *const> parent_grads)>;

/// Reverse-mode tape.  Nodes are appended in evaluation order, so a reverse
/// sweep is a valid topological order.  With gradients disabled the tape
/// only carries values (inference mode).
class Tape {
 public:
  explicit Tape(bool grad_enabled = true) : grad_enabled_(grad_enabled) {}
  Tape(const Tape &) = delete;
  Tape &operator=(const Tape &) = delete;

  Var Constant(Tensor value);
  /// Leaf whose gradient will be collected (model parameters, probes).
  Var Variable(Tensor value);
  Var Record(Tensor value, std::vector<Var> parents, BackwardFn backward);

  /// Seeds d(root)/d(root) = 1; root must hold a single element.
  void Backward(const Var &root);

  /// Gradient of the last Backward() root with respect to v; zeros when v
  /// was not reached.
  Tensor Grad(const Var &v) const;

  bool grad_enabled() const { return grad_enabled_; }
  std::size_t size() const { return nodes_.size(); }

 private:
  friend class Var;
  struct Node {
    Tensor value;
    Tensor grad;
    bool requires_grad = false;
    std::vector<std::size_t> parents;
    BackwardFn backward;
  };
  bool grad_enabled_;
  std::deque<Node> nodes_;
};

}  // namespace tta::ad

#endif  // TTA_AUTODIFF_TAPE_H_
