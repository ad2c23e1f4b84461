// core/include/artikit/error.h

// Copyright 2026 The artikit Authors

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

#ifndef ARTIKIT_ERROR_H_
#define ARTIKIT_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace artikit {

/// Every failure raised by the library carries one of these codes. The names
/// are part of the public contract: CLI diagnostics and tests match on them.
enum class ErrorCode {
  // ema-core
  kZeroVarianceChannel,
  kDegenerateClip,
  kCutoffAboveNyquist,
  kClipTooShortForFilter,
  kEmptyOverlap,
  kNonFiniteValue,
  // AKF / manifest I/O
  kBadMagic,
  kUnsupportedVersion,
  kTruncatedPayload,
  kDimensionMismatch,
  kMalformedMetadata,
  kInvalidManifest,
  kIo,
  // acoustic baselines
  kClipTooShort,
  kUnsupportedAudio,
  // solvers
  kSingularDesign,
  kShapeMismatch,
  // probing / alignment
  kZeroVarianceInput,
  kTooFewUtterances,
  kInconsistentCoverage,
  kSourceMismatch,
  kEmptyGroupPair,
  // stats
  kTooFewPairs,
  kEmptyCell,
  // synth / config / reports
  kInvalidSpec,
  kInvalidConfig,
  kInvalidReport,
};

/// Coarse classes used for process exit codes.
enum class ErrorCategory { kConfig, kData, kNumerical };

std::string_view error_code_name(ErrorCode code);
ErrorCategory error_category(ErrorCode code);

/// Exit code the CLI reports for an error: 2 config, 3 data, 4 numerical.
int exit_code_for(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);

}  // namespace artikit

#endif  // ARTIKIT_ERROR_H_
