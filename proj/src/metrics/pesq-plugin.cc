// src/metrics/pesq-plugin.cc

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

#include "tta/metrics/pesq-plugin.h"

#include <array>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <regex>
#include <spdlog/spdlog.h>
#include <sys/wait.h>
#include <unistd.h>

#include "tta/base/error.h"
#include "tta/signal/wav-io.h"

namespace tta::metrics {
namespace {

void ReplaceAll(std::string *s, const std::string &from, const std::string &to) {
  for (std::size_t pos = s->find(from); pos != std::string::npos;
       pos = s->find(from, pos + to.size()))
    s->replace(pos, from.size(), to);
}

std::string ShellQuote(const std::string &s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'')
      out += "'\\''";
    else
      out += c;
  }
  return out + "'";
}

}  // namespace

PesqPlugin::PesqPlugin(std::string command_template)
    : template_(std::move(command_template)) {
  TTA_REQUIRE(template_.empty() || (template_.find("{ref}") != std::string::npos &&
                                    template_.find("{est}") != std::string::npos),
              ErrorCode::kInvalidArgument,
              "PESQ command must contain {ref} and {est}");
}

std::optional<double> PesqPlugin::ParseScore(const std::string &output) {
  static const std::regex kScore(
      R"(score=([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?))");
  std::smatch m;
  if (!std::regex_search(output, m, kScore)) return std::nullopt;
  const double v = std::stod(m[1].str());
  if (!std::isfinite(v) || v < -0.5 || v > 4.5) return std::nullopt;
  return v;
}

std::optional<double> PesqPlugin::Evaluate(
    const signal::Waveform &reference, const signal::Waveform &estimate) const {
  if (!configured()) return std::nullopt;
  static std::atomic<unsigned> counter{0};
  const auto dir = std::filesystem::temp_directory_path() /
                   ("tta-pesq-" + std::to_string(::getpid()) + "-" +
                    std::to_string(counter++));
  std::filesystem::create_directories(dir);
  const auto ref_path = dir / "ref.wav", est_path = dir / "est.wav";
  std::optional<double> score;
  try {
    signal::WriteWav(ref_path, reference, signal::WavEncoding::kPcm16);
    signal::WriteWav(est_path, estimate, signal::WavEncoding::kPcm16);
    std::string cmd = template_;
    ReplaceAll(&cmd, "{ref}", ShellQuote(ref_path.string()));
    ReplaceAll(&cmd, "{est}", ShellQuote(est_path.string()));
    std::string output;
    FILE *pipe = ::popen(cmd.c_str(), "r");
    if (!pipe) throw Error(ErrorCode::kIo, "cannot start PESQ evaluator");
    std::array<char, 256> buf;
    while (std::fgets(buf.data(), buf.size(), pipe)) output += buf.data();
    const int status = ::pclose(pipe);
    if (status != 0 || !WIFEXITED(status) || WEXITSTATUS(status) != 0) {
      spdlog::warn("PESQ evaluator exited with status {}; score absent",
                   status);
    } else {
      score = ParseScore(output);
      if (!score)
        spdlog::warn("PESQ evaluator output has no valid score: '{}'", output);
    }
  } catch (const std::exception &e) {
    spdlog::warn("PESQ evaluation failed: {}", e.what());
    score.reset();
  }
  std::error_code ec;
  std::filesystem::remove_all(dir, ec);
  return score;
}

}  // namespace tta::metrics
