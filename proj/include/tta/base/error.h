// include/tta/base/error.h

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

#ifndef TTA_BASE_ERROR_H_
#define TTA_BASE_ERROR_H_

#include <stdexcept>
#include <string>

namespace tta {

enum class ErrorCode {
  kInvalidArgument,
  kInvalidSignal,
  kCannotSetSnr,
  kEmptyManifest,
  kMissingAudio,
  kTooShortInput,
  kEncoderConflict,
  kAlignmentError,
  kCorruptFile,
  kDegenerateEmbedding,
  kUndefinedReference,
  kNoSpeechFrames,
  kDivergence,
  kStageMismatch,
  kIo,
};

const char *ErrorCodeName(ErrorCode code);

/// Every failure raised by the library carries one of the codes above so the
/// CLI can map it to an exit status and tests can assert on the category.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string &what)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + what),
        code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

#define TTA_REQUIRE(cond, code, msg)                 \
  do {                                               \
    if (!(cond)) throw ::tta::Error((code), (msg));  \
  } while (0)

}  // namespace tta

#endif  // TTA_BASE_ERROR_H_
