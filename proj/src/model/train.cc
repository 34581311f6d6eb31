// src/model/train.cc

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

#include "tta/model/train.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <spdlog/spdlog.h>

#include "tta/autodiff/ops.h"
#include "tta/base/error.h"

namespace tta::model {

double MeanMse(const SeModel &model,
               const std::vector<data::UtterancePair> &pairs) {
  if (pairs.empty()) return 0.0;
  double sum = 0.0;
  for (const auto &p : pairs) {
    signal::Waveform est = model.Enhance(p.noisy);
    double e = 0.0;
    for (std::size_t i = 0; i < est.size(); ++i) {
      const double d = est.samples[i] - p.clean.samples[i];
      e += d * d;
    }
    sum += e / static_cast<double>(est.size());
  }
  return sum / static_cast<double>(pairs.size());
}

TrainReport TrainSource(SeModel *model,
                        const std::vector<data::UtterancePair> &train,
                        const std::vector<data::UtterancePair> &validation,
                        const TrainOptions &opts) {
  TTA_REQUIRE(!train.empty(), ErrorCode::kInvalidArgument,
              "source training needs at least one pair");
  TTA_REQUIRE(opts.batch_size >= 1, ErrorCode::kInvalidArgument,
              "batch size must be positive");
  TrainReport report;
  report.validation_utts = validation.size();
  report.initial_val_mse = MeanMse(*model, validation);
  const std::vector<bool> all(model->params().size(), true);
  AdamW opt(model->params(), all, opts.optimizer);
  std::mt19937_64 rng(opts.seed);
  std::vector<std::size_t> order(train.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  for (std::size_t epoch = 0; epoch < opts.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < order.size();
         start += opts.batch_size) {
      const std::size_t end = std::min(order.size(), start + opts.batch_size);
      std::vector<Tensor> grads;
      double batch_loss = 0.0;
      for (std::size_t j = start; j < end; ++j) {
        const data::UtterancePair &p = train[order[j]];
        signal::Waveform noisy = p.noisy, clean = p.clean;
        if (opts.segment_samples > 0 && noisy.size() > opts.segment_samples) {
          std::uniform_int_distribution<std::size_t> pick(
              0, noisy.size() - opts.segment_samples);
          const std::size_t off = pick(rng);
          const auto b = static_cast<std::ptrdiff_t>(off);
          const auto e = static_cast<std::ptrdiff_t>(off + opts.segment_samples);
          noisy.samples.assign(p.noisy.samples.begin() + b,
                               p.noisy.samples.begin() + e);
          clean.samples.assign(p.clean.samples.begin() + b,
                               p.clean.samples.begin() + e);
        }
        ad::Tape tape;
        BoundParams bp(tape, model->params(), all);
        ad::Var est = model->Forward(bp, noisy);
        ad::Var loss = ad::MeanSquaredError(
            est, tape.Constant(Tensor::Vector(clean.samples)));
        const double lv = loss.value()[0];
        if (!std::isfinite(lv))
          throw Error(ErrorCode::kDivergence,
                      "non-finite training loss at epoch " +
                          std::to_string(epoch) + ", step " +
                          std::to_string(report.steps) + ", utterance " +
                          p.record.id);
        tape.Backward(loss);
        std::vector<Tensor> g = bp.Grads();
        if (grads.empty()) {
          grads = std::move(g);
        } else {
          for (std::size_t k = 0; k < grads.size(); ++k)
            for (std::size_t n = 0; n < grads[k].size(); ++n)
              grads[k][n] += g[k][n];
        }
        batch_loss += lv;
      }
      const double inv = 1.0 / static_cast<double>(end - start);
      for (auto &g : grads)
        for (double &v : g.storage()) {
          v *= inv;
          if (!std::isfinite(v))
            throw Error(ErrorCode::kDivergence,
                        "non-finite gradient at epoch " +
                            std::to_string(epoch) + ", step " +
                            std::to_string(report.steps));
        }
      opt.Step(&model->params(), grads);
      ++report.steps;
      epoch_loss += batch_loss;
    }
    epoch_loss /= static_cast<double>(order.size());
    report.epoch_losses.push_back(epoch_loss);
    spdlog::debug("epoch {} train mse {:.6g}", epoch, epoch_loss);
    if (opts.on_epoch) opts.on_epoch(epoch, epoch_loss);
  }
  report.final_val_mse = MeanMse(*model, validation);
  return report;
}

}  // namespace tta::model
