// src/base/error.cc

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

#include "tta/base/error.h"

namespace tta {

const char *ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid-argument";
    case ErrorCode::kInvalidSignal: return "invalid-signal";
    case ErrorCode::kCannotSetSnr: return "cannot-set-snr";
    case ErrorCode::kEmptyManifest: return "empty-manifest";
    case ErrorCode::kMissingAudio: return "missing-audio";
    case ErrorCode::kTooShortInput: return "too-short-input";
    case ErrorCode::kEncoderConflict: return "encoder-conflict";
    case ErrorCode::kAlignmentError: return "alignment-error";
    case ErrorCode::kCorruptFile: return "corrupt-file";
    case ErrorCode::kDegenerateEmbedding: return "degenerate-embedding";
    case ErrorCode::kUndefinedReference: return "undefined-reference";
    case ErrorCode::kNoSpeechFrames: return "no-speech-frames";
    case ErrorCode::kDivergence: return "divergence";
    case ErrorCode::kStageMismatch: return "stage-mismatch";
    case ErrorCode::kIo: return "io-error";
  }
  return "unknown";
}

}  // namespace tta
