// core/src/error.cc

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

#include "artikit/error.h"

namespace artikit {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kZeroVarianceChannel: return "ZeroVarianceChannel";
    case ErrorCode::kDegenerateClip: return "DegenerateClip";
    case ErrorCode::kCutoffAboveNyquist: return "CutoffAboveNyquist";
    case ErrorCode::kClipTooShortForFilter: return "ClipTooShortForFilter";
    case ErrorCode::kEmptyOverlap: return "EmptyOverlap";
    case ErrorCode::kNonFiniteValue: return "NonFiniteValue";
    case ErrorCode::kBadMagic: return "BadMagic";
    case ErrorCode::kUnsupportedVersion: return "UnsupportedVersion";
    case ErrorCode::kTruncatedPayload: return "TruncatedPayload";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kMalformedMetadata: return "MalformedMetadata";
    case ErrorCode::kInvalidManifest: return "InvalidManifest";
    case ErrorCode::kIo: return "Io";
    case ErrorCode::kClipTooShort: return "ClipTooShort";
    case ErrorCode::kUnsupportedAudio: return "UnsupportedAudio";
    case ErrorCode::kSingularDesign: return "SingularDesign";
    case ErrorCode::kShapeMismatch: return "ShapeMismatch";
    case ErrorCode::kZeroVarianceInput: return "ZeroVarianceInput";
    case ErrorCode::kTooFewUtterances: return "TooFewUtterances";
    case ErrorCode::kInconsistentCoverage: return "InconsistentCoverage";
    case ErrorCode::kSourceMismatch: return "SourceMismatch";
    case ErrorCode::kEmptyGroupPair: return "EmptyGroupPair";
    case ErrorCode::kTooFewPairs: return "TooFewPairs";
    case ErrorCode::kEmptyCell: return "EmptyCell";
    case ErrorCode::kInvalidSpec: return "InvalidSpec";
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
    case ErrorCode::kInvalidReport: return "InvalidReport";
  }
  return "Unknown";
}

ErrorCategory error_category(ErrorCode code) {
  switch (code) {
    case ErrorCode::kCutoffAboveNyquist:
    case ErrorCode::kInvalidSpec:
    case ErrorCode::kInvalidConfig:
      return ErrorCategory::kConfig;
    case ErrorCode::kSingularDesign:
    case ErrorCode::kShapeMismatch:
    case ErrorCode::kZeroVarianceInput:
      return ErrorCategory::kNumerical;
    default:
      return ErrorCategory::kData;
  }
}

int exit_code_for(ErrorCode code) {
  switch (error_category(code)) {
    case ErrorCategory::kConfig: return 2;
    case ErrorCategory::kData: return 3;
    case ErrorCategory::kNumerical: return 4;
  }
  return 3;
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
      code_(code) {}

void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace artikit
