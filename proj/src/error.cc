// Copyright 2026 The Standoff Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "standoff/error.h"

namespace standoff {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMalformedXml: return "MalformedXml";
    case ErrorCode::kMissingBody: return "MissingBody";
    case ErrorCode::kOutOfRange: return "OutOfRange";
    case ErrorCode::kNoCtsDeclaration: return "NoCtsDeclaration";
    case ErrorCode::kBadLexicon: return "BadLexicon";
    case ErrorCode::kBadPolicy: return "BadPolicy";
    case ErrorCode::kMalformedRow: return "MalformedRow";
    case ErrorCode::kBadMorphTag: return "BadMorphTag";
    case ErrorCode::kBadHead: return "BadHead";
    case ErrorCode::kSentenceCountMismatch: return "SentenceCountMismatch";
    case ErrorCode::kTokenCountMismatch: return "TokenCountMismatch";
    case ErrorCode::kFormMismatch: return "FormMismatch";
    case ErrorCode::kCyclicDependency: return "CyclicDependency";
    case ErrorCode::kDanglingReference: return "DanglingReference";
    case ErrorCode::kDuplicateLayerName: return "DuplicateLayerName";
    case ErrorCode::kCycleIntroduced: return "CycleIntroduced";
    case ErrorCode::kInvalidLayer: return "InvalidLayer";
    case ErrorCode::kIoFailure: return "IoFailure";
    case ErrorCode::kUnvalidatedGraph: return "UnvalidatedGraph";
    case ErrorCode::kSourceMapMissing: return "SourceMapMissing";
    case ErrorCode::kMissingFile: return "MissingFile";
    case ErrorCode::kMalformedPointer: return "MalformedPointer";
    case ErrorCode::kBadConfig: return "BadConfig";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
      code_(code) {}

}  // namespace standoff
