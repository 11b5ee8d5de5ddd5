// Copyright 2026 The hypvol Authors
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

#include "hypvol/error.hpp"

namespace hypvol {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kPrecisionExhausted: return "PrecisionExhausted";
    case ErrorCode::kSyntaxError: return "SyntaxError";
    case ErrorCode::kUnsupportedLabel: return "UnsupportedLabel";
    case ErrorCode::kBadWeight: return "BadWeight";
    case ErrorCode::kNotLorentzian: return "NotLorentzian";
    case ErrorCode::kDisconnected: return "ErrorDisconnected";
    case ErrorCode::kTooLarge: return "TooLarge";
    case ErrorCode::kRankDeficient: return "RankDeficient";
    case ErrorCode::kNotInField: return "NotInField";
    case ErrorCode::kFieldNotQ: return "FieldNotQ";
    case ErrorCode::kDeltaIsSquare: return "DeltaIsSquare";
    case ErrorCode::kEvenDimension: return "EvenDimension";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kNoVertices: return "NoVertices";
    case ErrorCode::kTriangulationFailure: return "TriangulationFailure";
    case ErrorCode::kNonConvergent: return "NonConvergent";
  }
  return "Unknown";
}

}  // namespace hypvol
