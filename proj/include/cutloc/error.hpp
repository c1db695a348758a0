// Copyright 2026 The cutloc Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cutloc {

enum class ErrorCode {
  kInvalidGraph,
  kUnknownVertex,
  kRootMissing,
  kComplementEmpty,
  kNotPredecessorClosed,
  kGraphMismatch,
  kCutsNotOrdered,
  kDuplicatePredicate,
  kPredicateSyntax,
  kUnscriptedCut,
  kUnknownEdge,
  kInvalidAnomaly,
  kVerdictMismatch,
  kSessionFinished,
  kAnomalyNotConfirmed,
  kTooManyBetween,
  kUseBeforeDef,
  kBadCtrlRef,
  kBadTrace,
  kNoAssignEvents,
  kParse,
  kIo,
};

constexpr std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidGraph: return "InvalidGraph";
    case ErrorCode::kUnknownVertex: return "UnknownVertex";
    case ErrorCode::kRootMissing: return "RootMissing";
    case ErrorCode::kComplementEmpty: return "ComplementEmpty";
    case ErrorCode::kNotPredecessorClosed: return "NotPredecessorClosed";
    case ErrorCode::kGraphMismatch: return "GraphMismatch";
    case ErrorCode::kCutsNotOrdered: return "CutsNotOrdered";
    case ErrorCode::kDuplicatePredicate: return "DuplicatePredicate";
    case ErrorCode::kPredicateSyntax: return "PredicateSyntax";
    case ErrorCode::kUnscriptedCut: return "UnscriptedCut";
    case ErrorCode::kUnknownEdge: return "UnknownEdge";
    case ErrorCode::kInvalidAnomaly: return "InvalidAnomaly";
    case ErrorCode::kVerdictMismatch: return "VerdictMismatch";
    case ErrorCode::kSessionFinished: return "SessionFinished";
    case ErrorCode::kAnomalyNotConfirmed: return "AnomalyNotConfirmed";
    case ErrorCode::kTooManyBetween: return "TooManyBetween";
    case ErrorCode::kUseBeforeDef: return "UseBeforeDef";
    case ErrorCode::kBadCtrlRef: return "BadCtrlRef";
    case ErrorCode::kBadTrace: return "BadTrace";
    case ErrorCode::kNoAssignEvents: return "NoAssignEvents";
    case ErrorCode::kParse: return "Parse";
    case ErrorCode::kIo: return "Io";
  }
  return "Unknown";
}

// Every failure raised by the library carries a machine-checkable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace cutloc
