// src/autodiff/tape.cc

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

#include "tta/autodiff/tape.h"

#include "tta/base/error.h"

namespace tta::ad {

const Tensor &Var::value() const { return tape_->nodes_[id_].value; }

bool Var::requires_grad() const { return tape_->nodes_[id_].requires_grad; }

Var Tape::Constant(Tensor value) {
  nodes_.push_back(Node{std::move(value), {}, false, {}, {}});
  return Var(this, nodes_.size() - 1);
}

Var Tape::Variable(Tensor value) {
  nodes_.push_back(Node{std::move(value), {}, grad_enabled_, {}, {}});
  return Var(this, nodes_.size() - 1);
}

Var Tape::Record(Tensor value, std::vector<Var> parents, BackwardFn backward) {
  Node node;
  node.value = std::move(value);
  for (const Var &p : parents) {
    TTA_REQUIRE(p.tape_ == this, ErrorCode::kInvalidArgument,
                "operands recorded on different tapes");
    node.requires_grad = node.requires_grad || nodes_[p.id_].requires_grad;
  }
  node.requires_grad = node.requires_grad && grad_enabled_;
  if (node.requires_grad) {
    node.parents.reserve(parents.size());
    for (const Var &p : parents) node.parents.push_back(p.id_);
    node.backward = std::move(backward);
  }
  nodes_.push_back(std::move(node));
  return Var(this, nodes_.size() - 1);
}

void Tape::Backward(const Var &root) {
  TTA_REQUIRE(root.tape_ == this, ErrorCode::kInvalidArgument,
              "root belongs to another tape");
  TTA_REQUIRE(nodes_[root.id_].value.size() == 1, ErrorCode::kInvalidArgument,
              "backward root must be a scalar");
  for (Node &n : nodes_) n.grad = Tensor();
  Node &r = nodes_[root.id_];
  if (!r.requires_grad) return;
  r.grad = Tensor(r.value.shape(), 1.0);
  std::vector<Tensor *> pgrads;
  for (std::size_t i = root.id_ + 1; i-- > 0;) {
    Node &n = nodes_[i];
    if (!n.requires_grad || n.grad.empty() || !n.backward) continue;
    pgrads.clear();
    for (std::size_t pid : n.parents) {
      Node &p = nodes_[pid];
      if (!p.requires_grad) {
        pgrads.push_back(nullptr);
        continue;
      }
      if (p.grad.empty()) p.grad = Tensor(p.value.shape(), 0.0);
      pgrads.push_back(&p.grad);
    }
    n.backward(n.value, n.grad, pgrads);
    // Intermediate gradients are no longer needed once propagated.
    if (!n.parents.empty()) n.grad = Tensor();
  }
}

Tensor Tape::Grad(const Var &v) const {
  const Node &n = nodes_[v.id_];
  if (n.grad.empty()) return Tensor(n.value.shape(), 0.0);
  return n.grad;
}

}  // namespace tta::ad
