// src/metrics/report.cc

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

#include "tta/metrics/report.h"

#include "tta/base/error.h"
#include "tta/base/io-util.h"
#include "tta/metrics/metrics.h"

namespace tta::metrics {
namespace {

std::optional<double> Field(const UtteranceMetrics &m, const std::string &k) {
  if (k == "si_sdr") return m.si_sdr;
  if (k == "ssnr") return m.ssnr;
  if (k == "pesq") return m.pesq;
  if (k == "csig") return m.csig;
  if (k == "cbak") return m.cbak;
  if (k == "covl") return m.covl;
  return std::nullopt;
}

nlohmann::json Opt(const std::optional<double> &v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

std::optional<double> ReadOpt(const nlohmann::json &j, const char *key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<double>();
}

}  // namespace

void RunningAverage::Add(double x) {
  ++n_;
  mean_ += (x - mean_) / static_cast<double>(n_);
}

UtteranceMetrics ScoreUtterance(const std::string &id,
                                const signal::Waveform &clean,
                                const signal::Waveform &estimate,
                                const PesqPlugin &pesq) {
  UtteranceMetrics m;
  m.id = id;
  m.si_sdr = SiSdr(clean, estimate);
  m.ssnr = SegmentalSnr(clean, estimate);
  m.pesq = pesq.Evaluate(clean, estimate);
  if (m.pesq) {
    Composite c = CompositeMeasures(*m.pesq, Llr(clean, estimate),
                                    Wss(clean, estimate), m.ssnr);
    m.csig = c.csig;
    m.cbak = c.cbak;
    m.covl = c.covl;
  }
  return m;
}

const std::vector<std::string> &MetricReport::MetricNames() {
  static const std::vector<std::string> kNames = {"si_sdr", "ssnr", "pesq",
                                                  "csig",   "cbak", "covl"};
  return kNames;
}

void MetricReport::Add(const UtteranceMetrics &m) {
  per_utterance_.push_back(m);
  for (const auto &k : MetricNames())
    if (auto v = Field(m, k)) means_[k].Add(*v);
}

std::optional<double> MetricReport::Aggregate(const std::string &metric) const {
  auto it = means_.find(metric);
  if (it == means_.end() || it->second.count() == 0) return std::nullopt;
  return it->second.mean();
}

nlohmann::json MetricReport::ToJson() const {
  nlohmann::json per = nlohmann::json::array();
  for (const auto &m : per_utterance_)
    per.push_back({{"id", m.id},
                   {"si_sdr", m.si_sdr},
                   {"ssnr", m.ssnr},
                   {"pesq", Opt(m.pesq)},
                   {"csig", Opt(m.csig)},
                   {"cbak", Opt(m.cbak)},
                   {"covl", Opt(m.covl)}});
  nlohmann::json agg = nlohmann::json::object();
  for (const auto &k : MetricNames()) agg[k] = Opt(Aggregate(k));
  return {{"per_utterance", per}, {"aggregate", agg}, {"count", count()}};
}

MetricReport MetricReport::FromJson(const nlohmann::json &j) {
  MetricReport r;
  try {
    for (const auto &e : j.at("per_utterance")) {
      UtteranceMetrics m;
      m.id = e.at("id").get<std::string>();
      m.si_sdr = e.at("si_sdr").get<double>();
      m.ssnr = e.at("ssnr").get<double>();
      m.pesq = ReadOpt(e, "pesq");
      m.csig = ReadOpt(e, "csig");
      m.cbak = ReadOpt(e, "cbak");
      m.covl = ReadOpt(e, "covl");
      r.Add(m);
    }
  } catch (const nlohmann::json::exception &e) {
    throw Error(ErrorCode::kCorruptFile, std::string("metric report: ") + e.what());
  }
  return r;
}

void MetricReport::Save(const std::filesystem::path &path) const {
  WriteTextFile(path, ToJson().dump(2) + "\n");
}

MetricReport MetricReport::Load(const std::filesystem::path &path) {
  try {
    return FromJson(nlohmann::json::parse(ReadTextFile(path)));
  } catch (const nlohmann::json::exception &e) {
    throw Error(ErrorCode::kCorruptFile, path.string() + ": " + e.what());
  }
}

}  // namespace tta::metrics
