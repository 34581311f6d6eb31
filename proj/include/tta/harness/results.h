// include/tta/harness/results.h

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

#ifndef TTA_HARNESS_RESULTS_H_
#define TTA_HARNESS_RESULTS_H_

#include <filesystem>
#include <map>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "tta/harness/pipeline.h"

namespace tta::harness {

/// Mean and twice the sample standard deviation (n - 1 normalization).
/// A single value has zero spread.
struct Stat {
  double mean = 0.0;
  double two_sigma = 0.0;
  std::size_t n = 0;
};

Stat MeanTwoSigma(const std::vector<double> &values);

struct ResultsRow {
  std::string method;
  std::string dataset;  // "average" for the mean over datasets
  std::map<std::string, Stat> metrics;
};

struct ResultsTable {
  std::vector<ResultsRow> rows;

  const ResultsRow *Find(const std::string &method,
                         const std::string &dataset) const;
  nlohmann::json ToJson() const;
  std::string Format() const;  // fixed-width text, "mean ± 2σ" cells
  std::string Csv() const;     // one line per (method, dataset, metric)
};

inline constexpr const char *kAverageDataset = "average";

/// Metric means over seeds per (method, dataset), plus an "average" row per
/// method when more than one dataset is present.  Per seed the average row
/// first averages over datasets, then takes statistics over seeds.
ResultsTable BuildResults(const std::vector<RunSummary> &runs);

/// Seed-paired differences against the source_only arm of the same dataset.
/// Datasets without a source_only run are left out.
ResultsTable BuildDeltas(const std::vector<RunSummary> &runs);

/// Per-dataset PESQ and SI-SDR deltas with their spread, one line per
/// (dataset, method, metric): the data behind a radar plot.
std::string PlotCsv(const ResultsTable &deltas);

/// Loads every run.json below `root`, sorted by (dataset, method, seed).
/// Throws stage-mismatch when runs of one dataset disagree on the manifest
/// or source checkpoint, or when a (method, dataset, seed) repeats.
std::vector<RunSummary> CollectRuns(const std::filesystem::path &root);

struct ReportTables {
  ResultsTable results;
  ResultsTable deltas;
};

/// Aggregates the runs under `runs_root` and writes results.{json,txt,csv},
/// deltas.{json,txt,csv} and plot_deltas.csv into `out_dir`.
ReportTables CmdReport(const std::filesystem::path &runs_root,
                       const std::filesystem::path &out_dir);

}  // namespace tta::harness

#endif  // TTA_HARNESS_RESULTS_H_
