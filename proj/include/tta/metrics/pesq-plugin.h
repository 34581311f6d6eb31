// include/tta/metrics/pesq-plugin.h

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

#ifndef TTA_METRICS_PESQ_PLUGIN_H_
#define TTA_METRICS_PESQ_PLUGIN_H_

#include <optional>
#include <string>

#include "tta/signal/waveform.h"

namespace tta::metrics {

/// External PESQ evaluator.  The command template receives the paths of
/// temporary 16-bit WAV files through the {ref} and {est} placeholders and
/// must print a line "score=<real>" on stdout.  Scores outside [-0.5, 4.5],
/// a non-zero exit status or missing output give an absent value with a
/// logged diagnostic.  Wideband mode is expected at 16 kHz.
class PesqPlugin {
 public:
  PesqPlugin() = default;
  explicit PesqPlugin(std::string command_template);

  bool configured() const { return !template_.empty(); }
  const std::string &command_template() const { return template_; }

  std::optional<double> Evaluate(const signal::Waveform &reference,
                                 const signal::Waveform &estimate) const;

  /// Extracts the score from evaluator output; nullopt when absent or out
  /// of range.
  static std::optional<double> ParseScore(const std::string &output);

 private:
  std::string template_;
};

}  // namespace tta::metrics

#endif  // TTA_METRICS_PESQ_PLUGIN_H_
