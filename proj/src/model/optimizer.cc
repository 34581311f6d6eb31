// src/model/optimizer.cc

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

#include "tta/model/optimizer.h"

#include <cmath>
#include <cstdint>
#include <fstream>

#include "tta/base/error.h"
#include "tta/base/io-util.h"

namespace tta::model {

AdamW::AdamW(const ParamSet &params, std::vector<bool> mask,
             const AdamWOptions &opts)
    : mask_(std::move(mask)), opts_(opts) {
  TTA_REQUIRE(mask_.size() == params.size(), ErrorCode::kInvalidArgument,
              "optimizer mask size mismatch");
  TTA_REQUIRE(opts.lr > 0.0 && opts.weight_decay >= 0.0,
              ErrorCode::kInvalidArgument, "bad optimizer settings");
  for (std::size_t i = 0; i < params.size(); ++i) {
    m_.emplace_back(mask_[i] ? Tensor(params[i].value.shape()) : Tensor());
    v_.emplace_back(mask_[i] ? Tensor(params[i].value.shape()) : Tensor());
  }
}

void AdamW::Step(ParamSet *params, const std::vector<Tensor> &grads) {
  TTA_REQUIRE(grads.size() == params->size(), ErrorCode::kInvalidArgument,
              "gradient count mismatch");
  ++t_;
  const double c1 = 1.0 - std::pow(opts_.beta1, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(opts_.beta2, static_cast<double>(t_));
  const double decay = 1.0 - opts_.lr * opts_.weight_decay;
  for (std::size_t i = 0; i < params->size(); ++i) {
    if (!mask_[i]) continue;
    Tensor &p = (*params)[i].value;
    const Tensor &g = grads[i];
    TTA_REQUIRE(g.size() == p.size(), ErrorCode::kInvalidArgument,
                "gradient shape mismatch for " + (*params)[i].name);
    double *m = m_[i].data(), *v = v_[i].data(), *x = p.data();
    for (std::size_t j = 0; j < p.size(); ++j) {
      m[j] = opts_.beta1 * m[j] + (1.0 - opts_.beta1) * g[j];
      v[j] = opts_.beta2 * v[j] + (1.0 - opts_.beta2) * g[j] * g[j];
      x[j] *= decay;
      x[j] -= opts_.lr * (m[j] / c1) / (std::sqrt(v[j] / c2) + opts_.eps);
    }
  }
}

namespace {
constexpr char kMagic[] = "TTAADAM1";
}  // namespace

void AdamW::SaveState(const std::filesystem::path &path) const {
  if (path.has_parent_path())
    std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  out.write(kMagic, 8);
  const std::uint64_t t = t_, n = m_.size();
  out.write(reinterpret_cast<const char *>(&t), sizeof t);
  out.write(reinterpret_cast<const char *>(&n), sizeof n);
  for (std::size_t i = 0; i < m_.size(); ++i) {
    const std::uint64_t size = m_[i].size();
    out.write(reinterpret_cast<const char *>(&size), sizeof size);
    WriteDoubles(out, m_[i].values());
    WriteDoubles(out, v_[i].values());
  }
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
}

void AdamW::LoadState(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  char magic[8];
  std::uint64_t t = 0, n = 0;
  if (!in.read(magic, 8) || std::string(magic, 8) != kMagic ||
      !in.read(reinterpret_cast<char *>(&t), sizeof t) ||
      !in.read(reinterpret_cast<char *>(&n), sizeof n) || n != m_.size())
    throw Error(ErrorCode::kCorruptFile, path.string() + ": bad optimizer state");
  std::vector<Tensor> m = m_, v = v_;
  for (std::size_t i = 0; i < n; ++i) {
    std::uint64_t size = 0;
    if (!in.read(reinterpret_cast<char *>(&size), sizeof size) ||
        size != m[i].size() || !ReadDoubles(in, m[i].values()) ||
        !ReadDoubles(in, v[i].values()))
      throw Error(ErrorCode::kCorruptFile,
                  path.string() + ": optimizer state does not match the model");
  }
  t_ = t;
  m_ = std::move(m);
  v_ = std::move(v);
}

}  // namespace tta::model
