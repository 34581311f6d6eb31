// include/tta/metrics/report.h

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

#ifndef TTA_METRICS_REPORT_H_
#define TTA_METRICS_REPORT_H_

#include <cstddef>
#include <filesystem>
#include <map>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "tta/metrics/pesq-plugin.h"
#include "tta/signal/waveform.h"

namespace tta::metrics {

/// Streaming arithmetic mean, updated as mean += (x - mean) / n.
class RunningAverage {
 public:
  void Add(double x);
  double mean() const { return mean_; }
  std::size_t count() const { return n_; }

 private:
  double mean_ = 0.0;
  std::size_t n_ = 0;
};

struct UtteranceMetrics {
  std::string id;
  double si_sdr = 0.0;
  double ssnr = 0.0;
  std::optional<double> pesq;  // only with a configured plugin
  std::optional<double> csig;
  std::optional<double> cbak;
  std::optional<double> covl;
};

/// Scores one enhanced utterance against its clean reference.  Composites
/// are computed only when a PESQ score is available.
UtteranceMetrics ScoreUtterance(const std::string &id,
                                const signal::Waveform &clean,
                                const signal::Waveform &estimate,
                                const PesqPlugin &pesq);

/// Per-utterance metrics plus running means over the adaptation period.
/// Optional metrics are averaged over the utterances that have them and
/// stay null when none do.
class MetricReport {
 public:
  static const std::vector<std::string> &MetricNames();

  void Add(const UtteranceMetrics &m);

  std::size_t count() const { return per_utterance_.size(); }
  const std::vector<UtteranceMetrics> &per_utterance() const {
    return per_utterance_;
  }
  /// Mean of a metric, nullopt when no utterance has it.
  std::optional<double> Aggregate(const std::string &metric) const;

  nlohmann::json ToJson() const;
  static MetricReport FromJson(const nlohmann::json &j);
  void Save(const std::filesystem::path &path) const;
  static MetricReport Load(const std::filesystem::path &path);

 private:
  std::vector<UtteranceMetrics> per_utterance_;
  std::map<std::string, RunningAverage> means_;
};

}  // namespace tta::metrics

#endif  // TTA_METRICS_REPORT_H_
