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

// Volume prediction for quasi-arithmetic reflection groups over Q, rational
// recognition of vol / T, and the end-to-end analysis report.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "hypvol/coxeter.hpp"
#include "hypvol/error.hpp"
#include "hypvol/lfunc.hpp"
#include "hypvol/vinberg.hpp"
#include "hypvol/volume.hpp"

namespace hypvol {

struct VolumePrediction {
  enum class Case { kRationalField, kQuadraticField };

  int n = 0;
  int m = 0;  // (n + 1) / 2
  std::int64_t delta = 1;
  Case field_case = Case::kRationalField;
  std::optional<FundamentalDiscriminant> discriminant;  // kQuadraticField only
  Enclosed factor;  // zeta(m), or |D|^(n/2) L(m, chi_D)
};

std::string_view PredictionCaseName(VolumePrediction::Case c);

// Throws kEvenDimension for even n, kInvalidArgument for n < 5 or a
// non-squarefree delta.
VolumePrediction TranscendentalFactor(int n, std::int64_t delta, const PrecisionContext& ctx = {});

enum class RecognitionStatus { kRecognized, kRecognizedSmooth, kUnrecognized };

std::string_view RecognitionStatusName(RecognitionStatus s);

struct RecognitionOptions {
  // Largest prime allowed in the denominators tried after the
  // continued-fraction search fails; 0 disables that search.
  int smooth_bound = 0;
  // Largest expected number of chance hits the smooth search may accumulate.
  double chance_budget = 0.1;
};

struct RationalRecognition {
  RecognitionStatus status = RecognitionStatus::kUnrecognized;
  Integer p = 0;
  Integer q = 1;  // best candidate when unrecognized
  std::vector<std::pair<Integer, int>> q_factorization;
  Real residual;        // |x - p/q|
  Real error;           // input error bound
  Integer max_denominator;  // floor((4 err)^(-1/2))
  // kRecognized: distance from p/q to the nearest other fraction within the
  // guard, 1 / (q * max_denominator), over err. kRecognizedSmooth: inverse of
  // the expected number of chance hits among the denominators tried.
  double confidence = 0;
  std::uint64_t candidates_tried = 0;  // smooth search only
};

// Returns the first convergent p/q of x with |x - p/q| <= err and
// q <= (4 err)^(-1/2). Failing that, and if enabled, tries denominators built
// from primes <= smooth_bound in increasing order while the expected number
// of chance hits stays within budget.
RationalRecognition RecognizeRational(const Real& x, const Real& err,
                                      const RecognitionOptions& options = {});

struct AnalysisOptions {
  unsigned precision_bits = 128;
  double target_rel_error = 1e-3;
  std::uint64_t seed = 1;
  std::uint64_t max_samples = std::uint64_t{1} << 28;
  unsigned threads = 0;
  bool integrate = true;
  // Decimal strings, parsed at the working precision. Without an explicit
  // error the assumed volume is taken to be exact to half a unit in its last
  // digit.
  std::optional<std::string> assume_volume;
  std::optional<std::string> assume_error;
  int smooth_bound = -1;  // -1: n + 2; 0: off
  bool dump_geometry = false;
};

struct StageError {
  std::string stage;
  ErrorCode code;
  std::string message;
};

struct StageTiming {
  std::string stage;
  double seconds = 0;
};

struct AnalysisReport {
  std::optional<CoxeterDiagram> diagram;
  std::optional<Inertia> signature;
  std::optional<ArithmeticityReport> arithmeticity;
  std::optional<VolumePrediction> prediction;
  std::optional<VolumeEstimate> volume;
  std::optional<Enclosed> assumed_volume;
  std::optional<Enclosed> ratio;  // volume / T fed to recognition
  std::string ratio_source;       // "assumed" or "integrated"
  std::optional<RationalRecognition> recognition;
  std::optional<nlohmann::json> geometry;
  std::vector<std::string> notes;
  std::vector<StageError> errors;
  std::vector<StageTiming> timings;
  unsigned precision_bits = 128;

  // 0 on success, 3 if the diagram is not Lorentzian, 2 on any other stage
  // error.
  int ExitCode() const;
  // Human-readable form of the recognized identity, or empty.
  std::string SuggestedIdentity() const;
  nlohmann::json ToJson() const;
  std::string ToText() const;
};

// coxeter -> vinberg -> lfunc -> geometry -> volume -> recognition. Stage
// failures are recorded and later stages that depend on them are skipped.
AnalysisReport Analyze(std::string_view diagram_text, const AnalysisOptions& options = {});

}  // namespace hypvol
