// include/tta/diet/diet.h

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

#ifndef TTA_DIET_DIET_H_
#define TTA_DIET_DIET_H_

#include <Eigen/Dense>
#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include "tta/embed/cache.h"
#include "tta/embed/encoder.h"

namespace tta::diet {

/// Linear map taking noisy-speech embeddings onto clean-speech embeddings.
/// Immutable after fitting.
struct DietMap {
  Eigen::MatrixXd matrix;  // d x d
  Eigen::VectorXd bias;    // empty unless fitted with affine = true
  std::string encoder_id;
  std::string source_manifest_id;
  std::size_t k_samples = 0;
  double ridge = 0.0;
  double fit_residual = 0.0;  // mean squared residual per entry
  bool rank_deficient = false;

  std::size_t dim() const { return static_cast<std::size_t>(matrix.rows()); }
  bool affine() const { return bias.size() > 0; }
};

struct FitOptions {
  double ridge = 0.0;
  bool affine = false;
  std::string source_manifest_id;
};

/// Least squares fit of X ~ A Y with embeddings in the columns (d x K).
/// Solved with a rank-revealing complete orthogonal decomposition, which
/// yields the minimum-norm solution when Y is rank deficient.  With ridge > 0
/// the Tikhonov term is added by augmenting the system.  K < d requires
/// ridge > 0.
DietMap FitMatrices(const Eigen::MatrixXd &x, const Eigen::MatrixXd &y,
                    const FitOptions &opts = {});

/// Aligned design matrices from caches.  Records are taken by role (clean
/// from the first cache, noisy from the second); a cache holding a single
/// role contributes all its records.  Utterance ids must agree in order.
void AlignCaches(const embed::EmbeddingCache &clean,
                 const embed::EmbeddingCache &noisy, Eigen::MatrixXd *x,
                 Eigen::MatrixXd *y, std::vector<std::string> *ids = nullptr);

DietMap Fit(const embed::EmbeddingCache &clean,
            const embed::EmbeddingCache &noisy, const FitOptions &opts = {});

std::vector<double> ApplyVector(const DietMap &m,
                                const std::vector<double> &y);
embed::Embedding Apply(const DietMap &m, const embed::Embedding &y);

struct DietReport {
  double mean_sim_noisy = 0.0;
  double mean_sim_transformed = 0.0;
  std::size_t count = 0;     // utterances averaged
  std::size_t excluded = 0;  // skipped for a zero-norm embedding
};

DietReport EvaluateMatrices(const DietMap &m, const Eigen::MatrixXd &x,
                            const Eigen::MatrixXd &y);
DietReport Evaluate(const DietMap &m, const embed::EmbeddingCache &clean,
                    const embed::EmbeddingCache &noisy);

void SaveDiet(const DietMap &m, const std::filesystem::path &path);
DietMap LoadDiet(const std::filesystem::path &path);

}  // namespace tta::diet

#endif  // TTA_DIET_DIET_H_
