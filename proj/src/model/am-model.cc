// src/model/am-model.cc

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

#include "tta/model/am-model.h"

#include <cmath>
#include <random>

#include "tta/autodiff/ops.h"
#include "tta/base/error.h"
#include "tta/signal/signal-ops.h"

namespace tta::model {
namespace {

// softplus(x) = 1 at x = log(e - 1): the output bias starts the mask at unity.
const double kUnitMaskBias = std::log(std::expm1(1.0));

void FillUniform(Tensor *t, double bound, std::mt19937_64 &rng) {
  std::uniform_real_distribution<double> u(-bound, bound);
  for (double &v : t->storage()) v = u(rng);
}

}  // namespace

void AmConfig::Validate() const {
  TTA_REQUIRE(n_blocks >= 1, ErrorCode::kInvalidArgument,
              "need at least one residual block");
  TTA_REQUIRE(hidden >= 1, ErrorCode::kInvalidArgument,
              "hidden width must be positive");
  TTA_REQUIRE(heads >= 1 && hidden % heads == 0, ErrorCode::kInvalidArgument,
              "attention heads must divide the hidden width");
  TTA_REQUIRE(!conv_dilations.empty() && conv_channels >= 1 &&
                  conv_kernel % 2 == 1,
              ErrorCode::kInvalidArgument, "bad convolution settings");
  TTA_REQUIRE(fft_size >= 2 && (fft_size & (fft_size - 1)) == 0 && hop >= 1 &&
                  fft_size % hop == 0,
              ErrorCode::kInvalidArgument,
              "fft size must be a power of two divisible by the hop");
}

nlohmann::json ToJson(const AmConfig &c) {
  return {{"n_blocks", c.n_blocks},
          {"hidden", c.hidden},
          {"heads", c.heads},
          {"conv_dilations", c.conv_dilations},
          {"conv_channels", c.conv_channels},
          {"conv_kernel", c.conv_kernel},
          {"fft_size", c.fft_size},
          {"hop", c.hop},
          {"seed", c.seed}};
}

AmConfig AmConfigFromJson(const nlohmann::json &j) {
  AmConfig c;
  c.n_blocks = j.value("n_blocks", c.n_blocks);
  c.hidden = j.value("hidden", c.hidden);
  c.heads = j.value("heads", c.heads);
  c.conv_dilations = j.value("conv_dilations", c.conv_dilations);
  c.conv_channels = j.value("conv_channels", c.conv_channels);
  c.conv_kernel = j.value("conv_kernel", c.conv_kernel);
  c.fft_size = j.value("fft_size", c.fft_size);
  c.hop = j.value("hop", c.hop);
  c.seed = j.value("seed", c.seed);
  c.Validate();
  return c;
}

ParamCount AmParamCount(const AmConfig &c) {
  const std::size_t f = c.num_bins(), h = c.hidden, ch = c.conv_channels;
  const std::size_t k2 = c.conv_kernel * c.conv_kernel;
  auto linear = [](std::size_t in, std::size_t out) { return in * out + out; };
  const std::size_t layer_norms = 2 * (2 * h);
  const std::size_t attention = 4 * linear(h, h);
  const std::size_t mlps = 2 * 2 * linear(h, h);
  const std::size_t conv =
      c.conv_dilations.size() * (ch * k2 + ch) + (ch + 1);
  const std::size_t block = layer_norms + attention + mlps + conv;
  const std::size_t output = linear(h, h) + linear(h, f);
  ParamCount pc;
  pc.total = linear(f, h) + c.n_blocks * block + output;
  pc.adaptable = c.n_blocks * layer_norms + output;
  return pc;
}

AmModel::LinearIdx AmModel::AddLinear(const std::string &name, std::size_t in,
                                      std::size_t out, std::mt19937_64 &rng) {
  const double bound = 1.0 / std::sqrt(static_cast<double>(in));
  Tensor w({in, out}), b({out});
  FillUniform(&w, bound, rng);
  FillUniform(&b, bound, rng);
  LinearIdx l;
  l.w = params_.Add(name + ".weight", std::move(w));
  l.b = params_.Add(name + ".bias", std::move(b));
  return l;
}

AmModel::AmModel(const AmConfig &cfg) : cfg_(cfg) {
  cfg_.Validate();
  std::mt19937_64 rng(cfg_.seed);
  const std::size_t f = cfg_.num_bins(), h = cfg_.hidden;
  input_ = AddLinear("input", f, h, rng);
  for (std::size_t b = 0; b < cfg_.n_blocks; ++b) {
    const std::string pre = "blocks." + std::to_string(b) + ".";
    BlockIdx bi;
    bi.ln1_g = params_.Add(pre + "ln1.gamma", Tensor({h}, 1.0));
    bi.ln1_b = params_.Add(pre + "ln1.beta", Tensor({h}, 0.0));
    bi.q = AddLinear(pre + "attn.q", h, h, rng);
    bi.k = AddLinear(pre + "attn.k", h, h, rng);
    bi.v = AddLinear(pre + "attn.v", h, h, rng);
    bi.o = AddLinear(pre + "attn.o", h, h, rng);
    bi.mlp1_a = AddLinear(pre + "mlp1.fc1", h, h, rng);
    bi.mlp1_b = AddLinear(pre + "mlp1.fc2", h, h, rng);
    const std::size_t k = cfg_.conv_kernel, ch = cfg_.conv_channels;
    for (std::size_t dil : cfg_.conv_dilations) {
      const std::string name = pre + "conv.d" + std::to_string(dil);
      const double bound = 1.0 / static_cast<double>(k);
      Tensor w({ch, 1, k, k}), bias({ch});
      FillUniform(&w, bound, rng);
      FillUniform(&bias, bound, rng);
      bi.conv.push_back({params_.Add(name + ".weight", std::move(w)),
                         params_.Add(name + ".bias", std::move(bias))});
    }
    {
      const double bound = 1.0 / std::sqrt(static_cast<double>(ch));
      Tensor w({1, ch, 1, 1}), bias({1});
      FillUniform(&w, bound, rng);
      FillUniform(&bias, bound, rng);
      bi.conv_proj = {params_.Add(pre + "conv.proj.weight", std::move(w)),
                      params_.Add(pre + "conv.proj.bias", std::move(bias))};
    }
    bi.ln2_g = params_.Add(pre + "ln2.gamma", Tensor({h}, 1.0));
    bi.ln2_b = params_.Add(pre + "ln2.beta", Tensor({h}, 0.0));
    bi.mlp2_a = AddLinear(pre + "mlp2.fc1", h, h, rng);
    bi.mlp2_b = AddLinear(pre + "mlp2.fc2", h, h, rng);
    blocks_.push_back(std::move(bi));
  }
  out_a_ = AddLinear("output.fc1", h, h, rng);
  out_b_ = AddLinear("output.fc2", h, f, rng);
  // Small output weights and a unit-mask bias: the untrained model starts
  // close to passing the noisy signal through.
  for (double &v : params_[out_b_.w].value.storage()) v *= 0.1;
  params_[out_b_.b].value.Fill(kUnitMaskBias);
}

std::unique_ptr<SeModel> AmModel::Clone() const {
  return std::make_unique<AmModel>(*this);
}

signal::StftConfig AmModel::stft_config() const {
  signal::StftConfig s;
  s.frame_len = cfg_.fft_size;
  s.hop = cfg_.hop;
  s.window = signal::WindowType::kHann;
  return s;
}

std::vector<bool> AmModel::AdaptableMask() const {
  std::vector<bool> mask(params_.size(), false);
  for (const auto &b : blocks_)
    for (std::size_t i : {b.ln1_g, b.ln1_b, b.ln2_g, b.ln2_b}) mask[i] = true;
  for (std::size_t i : {out_a_.w, out_a_.b, out_b_.w, out_b_.b}) mask[i] = true;
  return mask;
}

void AmModel::ZeroSubLayers(std::size_t b) {
  TTA_REQUIRE(b < blocks_.size(), ErrorCode::kInvalidArgument,
              "no block " + std::to_string(b));
  const BlockIdx &bi = blocks_[b];
  std::vector<LinearIdx> all = {bi.q,      bi.k,      bi.v,      bi.o,
                                bi.mlp1_a, bi.mlp1_b, bi.mlp2_a, bi.mlp2_b,
                                bi.conv_proj};
  all.insert(all.end(), bi.conv.begin(), bi.conv.end());
  for (const auto &l : all) {
    params_[l.w].value.Fill(0.0);
    params_[l.b].value.Fill(0.0);
  }
}

Tensor AmModel::Features(const signal::Spectrogram &s) const {
  Tensor f = s.magnitudes;
  double mean = 0.0;
  for (double &v : f.storage()) {
    v = std::log1p(v);
    mean += v;
  }
  mean /= static_cast<double>(f.size());
  double var = 0.0;
  for (double v : f.storage()) var += (v - mean) * (v - mean);
  var /= static_cast<double>(f.size());
  const double inv = 1.0 / std::sqrt(var + 1e-8);
  for (double &v : f.storage()) v = (v - mean) * inv;
  return f;
}

ad::Var AmModel::ApplyLinear(const BoundParams &p, const LinearIdx &l,
                             const ad::Var &x) const {
  return ad::Linear(x, p[l.w], p[l.b]);
}

ad::Var AmModel::Mlp(const BoundParams &p, const LinearIdx &a,
                     const LinearIdx &b, const ad::Var &x) const {
  return ApplyLinear(p, b, ad::Gelu(ApplyLinear(p, a, x)));
}

ad::Var AmModel::Block(const BoundParams &p, std::size_t b,
                       const ad::Var &x) const {
  const BlockIdx &bi = blocks_.at(b);
  const std::size_t t = x.value().rows(), h = cfg_.hidden;
  ad::Var z = ad::LayerNorm(x, p[bi.ln1_g], p[bi.ln1_b]);
  ad::Var attn = ad::MultiHeadAttention(ApplyLinear(p, bi.q, z),
                                        ApplyLinear(p, bi.k, z),
                                        ApplyLinear(p, bi.v, z), cfg_.heads);
  z = ad::Add(z, ApplyLinear(p, bi.o, attn));
  z = ad::Add(z, Mlp(p, bi.mlp1_a, bi.mlp1_b, z));
  if (!hooks_.disable_conv) {
    ad::Var sum;
    for (std::size_t i = 0; i < bi.conv.size(); ++i) {
      ad::Var c = ad::Conv2d(z, p[bi.conv[i].w], p[bi.conv[i].b],
                             cfg_.conv_dilations[i]);
      sum = i == 0 ? c : ad::Add(sum, c);
    }
    ad::Var c = ad::Conv2d(ad::Gelu(sum), p[bi.conv_proj.w],
                           p[bi.conv_proj.b], 1);
    z = ad::Add(z, ad::Reshape(c, {t, h}));
  }
  z = ad::LayerNorm(z, p[bi.ln2_g], p[bi.ln2_b]);
  return ad::Add(x, Mlp(p, bi.mlp2_a, bi.mlp2_b, z));
}

ad::Var AmModel::Mask(const BoundParams &p,
                      const signal::Spectrogram &s) const {
  ad::Tape &tape = p.tape();
  if (hooks_.mask != MaskOverride::kNone)
    return tape.Constant(Tensor({s.num_frames(), s.num_bins()},
                                hooks_.mask == MaskOverride::kOnes ? 1.0 : 0.0));
  ad::Var x = tape.Constant(Features(s));
  x = ad::Gelu(ApplyLinear(p, input_, x));
  for (std::size_t b = 0; b < blocks_.size(); ++b) x = Block(p, b, x);
  return ad::Softplus(Mlp(p, out_a_, out_b_, x));
}

ad::Var AmModel::Forward(const BoundParams &p,
                         const signal::Waveform &noisy) const {
  signal::CheckWaveform(noisy);
  TTA_REQUIRE(p.size() == params_.size(), ErrorCode::kInvalidArgument,
              "bound parameters do not belong to this model");
  const signal::StftConfig sc = stft_config();
  signal::Spectrogram spec = signal::CenteredStft(noisy, sc);
  ad::Var full = signal::MaskedIstft(Mask(p, spec), spec);
  return ad::Crop(full, signal::CenterPad(sc), noisy.size());
}

}  // namespace tta::model
