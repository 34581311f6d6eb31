// src/diet/diet.cc

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

#include "tta/diet/diet.h"

#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>

#include "tta/base/error.h"
#include "tta/base/io-util.h"

namespace tta::diet {
namespace {

std::uint32_t MapChecksum(const DietMap &m) {
  const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>
      rm = m.matrix;
  std::uint32_t crc =
      Crc32(std::span<const double>(rm.data(), static_cast<std::size_t>(rm.size())));
  if (m.affine())
    crc = Crc32(std::span<const double>(m.bias.data(),
                                        static_cast<std::size_t>(m.bias.size())),
                crc);
  return crc;
}

std::vector<const embed::CachedEmbedding *> Select(
    const embed::EmbeddingCache &c, embed::Role role) {
  auto picked = c.WithRole(role);
  if (picked.empty() || picked.size() == c.records.size()) {
    // Single-role cache: take everything.
    picked.clear();
    for (const auto &r : c.records) picked.push_back(&r);
  }
  return picked;
}

double Cos(const Eigen::VectorXd &a, const Eigen::VectorXd &b) {
  return std::clamp(a.dot(b) / (a.norm() * b.norm()), -1.0, 1.0);
}

}  // namespace

DietMap FitMatrices(const Eigen::MatrixXd &x, const Eigen::MatrixXd &y,
                    const FitOptions &opts) {
  const Eigen::Index d = y.rows();
  const Eigen::Index k = y.cols();
  TTA_REQUIRE(d >= 1 && k >= 1, ErrorCode::kInvalidArgument,
              "fit needs at least one embedding");
  TTA_REQUIRE(x.rows() == d && x.cols() == k, ErrorCode::kAlignmentError,
              "clean and noisy embedding matrices differ in shape");
  TTA_REQUIRE(opts.ridge >= 0.0 && std::isfinite(opts.ridge),
              ErrorCode::kInvalidArgument, "ridge must be non-negative");
  TTA_REQUIRE(x.allFinite() && y.allFinite(), ErrorCode::kInvalidArgument,
              "non-finite embedding entries");
  TTA_REQUIRE(k >= d || opts.ridge > 0.0, ErrorCode::kInvalidArgument,
              "fewer samples (" + std::to_string(k) + ") than dimensions (" +
                  std::to_string(d) + ") requires a ridge term");

  // Solve Y^T A^T = X^T, optionally with a ones column for the offset and
  // sqrt(ridge) I rows for regularization.  The offset is not penalized.
  const Eigen::Index p = opts.affine ? d + 1 : d;
  const Eigen::Index rows = opts.ridge > 0.0 ? k + d : k;
  Eigen::MatrixXd lhs = Eigen::MatrixXd::Zero(rows, p);
  Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(rows, d);
  lhs.topLeftCorner(k, d) = y.transpose();
  if (opts.affine) lhs.block(0, d, k, 1).setOnes();
  rhs.topRows(k) = x.transpose();
  if (opts.ridge > 0.0)
    lhs.block(k, 0, d, d) =
        std::sqrt(opts.ridge) * Eigen::MatrixXd::Identity(d, d);

  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(lhs);
  Eigen::MatrixXd sol = cod.solve(rhs);  // p x d

  DietMap m;
  m.matrix = sol.topRows(d).transpose();
  if (opts.affine) m.bias = sol.row(d).transpose();
  m.k_samples = static_cast<std::size_t>(k);
  m.ridge = opts.ridge;
  m.rank_deficient = cod.rank() < p;
  m.source_manifest_id = opts.source_manifest_id;
  Eigen::MatrixXd resid = x - m.matrix * y;
  if (m.affine()) resid.colwise() -= m.bias;
  m.fit_residual = resid.squaredNorm() / static_cast<double>(d * k);
  TTA_REQUIRE(m.matrix.allFinite(), ErrorCode::kInvalidArgument,
              "fit produced non-finite entries");
  return m;
}

void AlignCaches(const embed::EmbeddingCache &clean,
                 const embed::EmbeddingCache &noisy, Eigen::MatrixXd *x,
                 Eigen::MatrixXd *y, std::vector<std::string> *ids) {
  if (clean.encoder_id != noisy.encoder_id)
    throw Error(ErrorCode::kEncoderConflict,
                "caches built with different encoders: " + clean.encoder_id +
                    " vs " + noisy.encoder_id);
  TTA_REQUIRE(clean.dim == noisy.dim, ErrorCode::kAlignmentError,
              "caches differ in dimension");
  auto xs = Select(clean, embed::Role::kClean);
  auto ys = Select(noisy, embed::Role::kNoisy);
  TTA_REQUIRE(xs.size() == ys.size(), ErrorCode::kAlignmentError,
              "caches hold " + std::to_string(xs.size()) + " clean and " +
                  std::to_string(ys.size()) + " noisy embeddings");
  const Eigen::Index d = static_cast<Eigen::Index>(clean.dim);
  const Eigen::Index k = static_cast<Eigen::Index>(xs.size());
  x->resize(d, k);
  y->resize(d, k);
  if (ids) ids->clear();
  for (Eigen::Index j = 0; j < k; ++j) {
    const auto &a = *xs[static_cast<std::size_t>(j)];
    const auto &b = *ys[static_cast<std::size_t>(j)];
    if (a.utterance_id != b.utterance_id)
      throw Error(ErrorCode::kAlignmentError,
                  "record " + std::to_string(j) + ": clean id " +
                      a.utterance_id + " vs noisy id " + b.utterance_id);
    x->col(j) = Eigen::Map<const Eigen::VectorXd>(a.vector.data(), d);
    y->col(j) = Eigen::Map<const Eigen::VectorXd>(b.vector.data(), d);
    if (ids) ids->push_back(a.utterance_id);
  }
}

DietMap Fit(const embed::EmbeddingCache &clean,
            const embed::EmbeddingCache &noisy, const FitOptions &opts) {
  Eigen::MatrixXd x, y;
  AlignCaches(clean, noisy, &x, &y);
  DietMap m = FitMatrices(x, y, opts);
  m.encoder_id = clean.encoder_id;
  return m;
}

std::vector<double> ApplyVector(const DietMap &m,
                                const std::vector<double> &y) {
  TTA_REQUIRE(y.size() == m.dim(), ErrorCode::kInvalidArgument,
              "embedding has dimension " + std::to_string(y.size()) +
                  ", map expects " + std::to_string(m.dim()));
  Eigen::VectorXd out =
      m.matrix * Eigen::Map<const Eigen::VectorXd>(y.data(), m.matrix.cols());
  if (m.affine()) out += m.bias;
  return {out.data(), out.data() + out.size()};
}

embed::Embedding Apply(const DietMap &m, const embed::Embedding &y) {
  if (!m.encoder_id.empty() && y.encoder_id != m.encoder_id)
    throw Error(ErrorCode::kEncoderConflict,
                "map fitted for encoder " + m.encoder_id +
                    " applied to embedding from " + y.encoder_id);
  return {ApplyVector(m, y.vector), y.encoder_id, y.utterance_id};
}

DietReport EvaluateMatrices(const DietMap &m, const Eigen::MatrixXd &x,
                            const Eigen::MatrixXd &y) {
  TTA_REQUIRE(x.rows() == static_cast<Eigen::Index>(m.dim()) &&
                  y.rows() == x.rows() && y.cols() == x.cols(),
              ErrorCode::kAlignmentError, "embedding matrices do not match map");
  DietReport r;
  double sum_noisy = 0.0, sum_trans = 0.0;
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    Eigen::VectorXd t = m.matrix * y.col(j);
    if (m.affine()) t += m.bias;
    if (x.col(j).norm() == 0.0 || y.col(j).norm() == 0.0 || t.norm() == 0.0) {
      ++r.excluded;
      continue;
    }
    sum_noisy += Cos(x.col(j), y.col(j));
    sum_trans += Cos(x.col(j), t);
    ++r.count;
  }
  if (r.count > 0) {
    r.mean_sim_noisy = sum_noisy / static_cast<double>(r.count);
    r.mean_sim_transformed = sum_trans / static_cast<double>(r.count);
  }
  return r;
}

DietReport Evaluate(const DietMap &m, const embed::EmbeddingCache &clean,
                    const embed::EmbeddingCache &noisy) {
  Eigen::MatrixXd x, y;
  AlignCaches(clean, noisy, &x, &y);
  if (!m.encoder_id.empty() && clean.encoder_id != m.encoder_id)
    throw Error(ErrorCode::kEncoderConflict,
                "map fitted for encoder " + m.encoder_id + ", caches from " +
                    clean.encoder_id);
  return EvaluateMatrices(m, x, y);
}

void SaveDiet(const DietMap &m, const std::filesystem::path &path) {
  nlohmann::json h = {{"encoder_id", m.encoder_id},
                      {"source_manifest_id", m.source_manifest_id},
                      {"d", m.dim()},
                      {"K", m.k_samples},
                      {"ridge", m.ridge},
                      {"fit_residual", m.fit_residual},
                      {"rank_deficient", m.rank_deficient},
                      {"affine", m.affine()},
                      {"checksum", Crc32Hex(MapChecksum(m))}};
  if (path.has_parent_path())
    std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path.string());
  WriteLengthPrefixed(out, h.dump());
  const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>
      rm = m.matrix;
  WriteDoubles(out, std::span<const double>(rm.data(),
                                            static_cast<std::size_t>(rm.size())));
  if (m.affine())
    WriteDoubles(out, std::span<const double>(
                          m.bias.data(), static_cast<std::size_t>(m.bias.size())));
  if (!out) throw Error(ErrorCode::kIo, "write failed: " + path.string());
}

DietMap LoadDiet(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path.string());
  std::string text;
  if (!ReadLengthPrefixed(in, &text, 1u << 20))
    throw Error(ErrorCode::kCorruptFile, path.string() + ": bad header");
  DietMap m;
  std::size_t d = 0;
  bool affine = false;
  std::string checksum;
  try {
    auto h = nlohmann::json::parse(text);
    m.encoder_id = h.at("encoder_id").get<std::string>();
    m.source_manifest_id = h.at("source_manifest_id").get<std::string>();
    d = h.at("d").get<std::size_t>();
    m.k_samples = h.at("K").get<std::size_t>();
    m.ridge = h.at("ridge").get<double>();
    m.fit_residual = h.at("fit_residual").get<double>();
    m.rank_deficient = h.at("rank_deficient").get<bool>();
    affine = h.at("affine").get<bool>();
    checksum = h.at("checksum").get<std::string>();
  } catch (const nlohmann::json::exception &e) {
    throw Error(ErrorCode::kCorruptFile, path.string() + ": " + e.what());
  }
  TTA_REQUIRE(d >= 1 && d <= 65536, ErrorCode::kCorruptFile,
              path.string() + ": bad dimension");
  const auto dd = static_cast<Eigen::Index>(d);
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rm(dd,
                                                                            dd);
  if (!ReadDoubles(in, std::span<double>(rm.data(), d * d)))
    throw Error(ErrorCode::kCorruptFile, path.string() + ": truncated matrix");
  m.matrix = rm;
  if (affine) {
    m.bias.resize(dd);
    if (!ReadDoubles(in, std::span<double>(m.bias.data(), d)))
      throw Error(ErrorCode::kCorruptFile, path.string() + ": truncated bias");
  }
  if (in.peek() != std::char_traits<char>::eof())
    throw Error(ErrorCode::kCorruptFile, path.string() + ": trailing bytes");
  if (Crc32Hex(MapChecksum(m)) != checksum)
    throw Error(ErrorCode::kCorruptFile, path.string() + ": checksum mismatch");
  return m;
}

}  // namespace tta::diet
