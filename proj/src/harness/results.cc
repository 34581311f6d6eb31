// src/harness/results.cc

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

#include "tta/harness/results.h"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <tuple>

#include "tta/base/error.h"
#include "tta/base/io-util.h"
#include "tta/metrics/report.h"

namespace tta::harness {

Stat MeanTwoSigma(const std::vector<double> &values) {
  Stat s;
  s.n = values.size();
  if (s.n == 0) return s;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / s.n;
  if (s.n > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.two_sigma = 2.0 * std::sqrt(ss / (s.n - 1));
  }
  return s;
}

const ResultsRow *ResultsTable::Find(const std::string &method,
                                     const std::string &dataset) const {
  for (const auto &r : rows)
    if (r.method == method && r.dataset == dataset) return &r;
  return nullptr;
}

nlohmann::json ResultsTable::ToJson() const {
  nlohmann::json out = nlohmann::json::array();
  for (const auto &r : rows) {
    nlohmann::json m = nlohmann::json::object();
    for (const auto &[k, s] : r.metrics)
      m[k] = {{"mean", s.mean}, {"two_sigma", s.two_sigma}, {"n", s.n}};
    out.push_back({{"method", r.method}, {"dataset", r.dataset}, {"metrics", m}});
  }
  return out;
}

std::string ResultsTable::Format() const {
  const auto &names = metrics::MetricReport::MetricNames();
  std::ostringstream os;
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%-12s %-16s", "method", "dataset");
  os << buf;
  for (const auto &n : names) {
    std::snprintf(buf, sizeof(buf), " %18s", n.c_str());
    os << buf;
  }
  os << '\n';
  for (const auto &r : rows) {
    std::snprintf(buf, sizeof(buf), "%-12s %-16s", r.method.c_str(),
                  r.dataset.c_str());
    os << buf;
    for (const auto &n : names) {
      auto it = r.metrics.find(n);
      if (it == r.metrics.end()) {
        std::snprintf(buf, sizeof(buf), " %18s", "-");
      } else {
        char cell[40];
        std::snprintf(cell, sizeof(cell), "%.3f +- %.3f", it->second.mean,
                      it->second.two_sigma);
        std::snprintf(buf, sizeof(buf), " %18s", cell);
      }
      os << buf;
    }
    os << '\n';
  }
  return os.str();
}

std::string ResultsTable::Csv() const {
  std::ostringstream os;
  os.precision(10);
  os << "method,dataset,metric,mean,two_sigma,n\n";
  for (const auto &r : rows)
    for (const auto &[k, s] : r.metrics)
      os << r.method << ',' << r.dataset << ',' << k << ',' << s.mean << ','
         << s.two_sigma << ',' << s.n << '\n';
  return os.str();
}

namespace {

using Key = std::pair<std::string, std::string>;  // (method, dataset)

// Ordering of methods in tables: baseline first, then the rest by name.
bool MethodLess(const std::string &a, const std::string &b) {
  const bool sa = a == "source_only", sb = b == "source_only";
  if (sa != sb) return sa;
  return a < b;
}

std::vector<std::string> SortedMethods(const std::vector<RunSummary> &runs) {
  std::set<std::string> s;
  for (const auto &r : runs) s.insert(r.method);
  std::vector<std::string> v(s.begin(), s.end());
  std::sort(v.begin(), v.end(), MethodLess);
  return v;
}

std::vector<std::string> SortedDatasets(const std::vector<RunSummary> &runs) {
  std::set<std::string> s;
  for (const auto &r : runs) s.insert(r.dataset);
  return {s.begin(), s.end()};
}

// metric -> seed -> value for one (method, dataset).
using SeedValues = std::map<std::string, std::map<std::uint64_t, double>>;

std::map<Key, SeedValues> Index(const std::vector<RunSummary> &runs) {
  std::map<Key, SeedValues> idx;
  for (const auto &r : runs)
    for (const auto &[metric, v] : r.aggregate)
      idx[{r.method, r.dataset}][metric][r.seed] = v;
  return idx;
}

ResultsRow MakeRow(const std::string &method, const std::string &dataset,
                   const SeedValues &values) {
  ResultsRow row{method, dataset, {}};
  for (const auto &[metric, by_seed] : values) {
    std::vector<double> v;
    for (const auto &[seed, x] : by_seed) v.push_back(x);
    row.metrics[metric] = MeanTwoSigma(v);
  }
  return row;
}

// Per seed, the mean over datasets, for seeds present in every dataset.
SeedValues AverageOverDatasets(const std::map<Key, SeedValues> &idx,
                               const std::string &method,
                               const std::vector<std::string> &datasets) {
  SeedValues out;
  std::set<std::string> metric_names;
  for (const auto &d : datasets) {
    auto it = idx.find({method, d});
    if (it == idx.end()) return {};
    for (const auto &[m, _] : it->second) metric_names.insert(m);
  }
  for (const auto &m : metric_names) {
    std::map<std::uint64_t, std::pair<double, std::size_t>> acc;
    for (const auto &d : datasets) {
      auto mit = idx.at({method, d}).find(m);
      if (mit == idx.at({method, d}).end()) continue;
      for (const auto &[seed, v] : mit->second) {
        acc[seed].first += v;
        ++acc[seed].second;
      }
    }
    for (const auto &[seed, p] : acc)
      if (p.second == datasets.size()) out[m][seed] = p.first / p.second;
    if (out[m].empty()) out.erase(m);
  }
  return out;
}

ResultsTable Tabulate(const std::map<Key, SeedValues> &idx,
                      const std::vector<std::string> &methods,
                      const std::vector<std::string> &datasets) {
  ResultsTable t;
  for (const auto &m : methods) {
    for (const auto &d : datasets) {
      auto it = idx.find({m, d});
      if (it != idx.end()) t.rows.push_back(MakeRow(m, d, it->second));
    }
    if (datasets.size() > 1) {
      SeedValues avg = AverageOverDatasets(idx, m, datasets);
      if (!avg.empty()) t.rows.push_back(MakeRow(m, kAverageDataset, avg));
    }
  }
  return t;
}

}  // namespace

ResultsTable BuildResults(const std::vector<RunSummary> &runs) {
  return Tabulate(Index(runs), SortedMethods(runs), SortedDatasets(runs));
}

ResultsTable BuildDeltas(const std::vector<RunSummary> &runs) {
  const auto idx = Index(runs);
  const auto methods = SortedMethods(runs);
  std::vector<std::string> datasets;
  for (const auto &d : SortedDatasets(runs)) {
    if (idx.count({"source_only", d}))
      datasets.push_back(d);
    else
      spdlog::warn("no source_only run for {}; deltas omitted", d);
  }
  std::map<Key, SeedValues> delta;
  for (const auto &m : methods)
    for (const auto &d : datasets) {
      auto it = idx.find({m, d});
      if (it == idx.end()) continue;
      const SeedValues &base = idx.at({"source_only", d});
      for (const auto &[metric, by_seed] : it->second) {
        auto bit = base.find(metric);
        if (bit == base.end()) continue;
        for (const auto &[seed, v] : by_seed) {
          auto sit = bit->second.find(seed);
          if (sit != bit->second.end())
            delta[{m, d}][metric][seed] = v - sit->second;
        }
      }
    }
  return Tabulate(delta, methods, datasets);
}

std::string PlotCsv(const ResultsTable &deltas) {
  std::ostringstream os;
  os.precision(10);
  os << "dataset,method,metric,delta_mean,delta_two_sigma,n\n";
  for (const auto &r : deltas.rows)
    for (const char *metric : {"pesq", "si_sdr"}) {
      auto it = r.metrics.find(metric);
      if (it == r.metrics.end()) continue;
      os << r.dataset << ',' << r.method << ',' << metric << ','
         << it->second.mean << ',' << it->second.two_sigma << ','
         << it->second.n << '\n';
    }
  return os.str();
}

std::vector<RunSummary> CollectRuns(const std::filesystem::path &root) {
  TTA_REQUIRE(std::filesystem::is_directory(root), ErrorCode::kInvalidArgument,
              "runs directory not found: " + root.string());
  std::vector<RunSummary> runs;
  for (const auto &e : std::filesystem::recursive_directory_iterator(root)) {
    if (!e.is_regular_file() || e.path().filename() != "run.json") continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(ReadTextFile(e.path()));
    } catch (const nlohmann::json::exception &ex) {
      throw Error(ErrorCode::kCorruptFile, e.path().string() + ": " + ex.what());
    }
    runs.push_back(RunSummary::FromJson(j));
  }
  TTA_REQUIRE(!runs.empty(), ErrorCode::kInvalidArgument,
              "no run.json found under " + root.string());
  std::sort(runs.begin(), runs.end(), [](const auto &a, const auto &b) {
    return std::tie(a.dataset, a.method, a.seed) <
           std::tie(b.dataset, b.method, b.seed);
  });
  std::map<std::string, const RunSummary *> first;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const auto &r = runs[i];
    if (i > 0 && r.dataset == runs[i - 1].dataset &&
        r.method == runs[i - 1].method && r.seed == runs[i - 1].seed)
      throw Error(ErrorCode::kStageMismatch,
                  "duplicate run for " + r.method + "/" + r.dataset +
                      " seed " + std::to_string(r.seed));
    auto [it, inserted] = first.emplace(r.dataset, &r);
    if (inserted) continue;
    if (it->second->manifest_id != r.manifest_id ||
        it->second->checkpoint_crc != r.checkpoint_crc)
      throw Error(ErrorCode::kStageMismatch,
                  "runs on " + r.dataset +
                      " used different manifests or source checkpoints (" +
                      it->second->method + " vs " + r.method + ")");
  }
  return runs;
}

ReportTables CmdReport(const std::filesystem::path &runs_root,
                       const std::filesystem::path &out_dir) {
  const auto runs = CollectRuns(runs_root);
  ReportTables t{BuildResults(runs), BuildDeltas(runs)};
  std::filesystem::create_directories(out_dir);
  WriteTextFile(out_dir / "results.json", t.results.ToJson().dump(2));
  WriteTextFile(out_dir / "results.txt", t.results.Format());
  WriteTextFile(out_dir / "results.csv", t.results.Csv());
  WriteTextFile(out_dir / "deltas.json", t.deltas.ToJson().dump(2));
  WriteTextFile(out_dir / "deltas.txt", t.deltas.Format());
  WriteTextFile(out_dir / "deltas.csv", t.deltas.Csv());
  WriteTextFile(out_dir / "plot_deltas.csv", PlotCsv(t.deltas));
  return t;
}

}  // namespace tta::harness
