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

// Hyperbolic volume in the Klein ball, where the density is
// (1 - |x|^2)^(-(n+1)/2), by randomized quasi-Monte Carlo over simplices.

#pragma once

#include <cstdint>
#include <memory>
#include <string_view>
#include <vector>

#include "hypvol/geometry.hpp"

namespace hypvol {

enum class Strategy { kQMC, kMC, kSubdivision };
std::string_view StrategyName(Strategy s);

struct VolumeEstimate {
  double value = 0;
  double abs_error = 0;
  double rel_error = 0;
  std::uint64_t samples = 0;
  Strategy strategy = Strategy::kQMC;
};

struct VolumeOptions {
  double target_rel_error = 1e-4;
  std::uint64_t seed = 1;
  std::uint64_t max_samples = std::uint64_t{1} << 28;  // density evaluations
  std::uint64_t initial_points = 1024;  // per replicate, power of two
  int replicates = 8;
  Strategy sampler = Strategy::kQMC;  // kQMC (scrambled Sobol) or kMC
  unsigned threads = 0;               // 0: hardware concurrency
};

// A simplex in the Klein ball; at most one vertex may lie on the sphere.
struct KleinSimplex {
  std::vector<std::vector<double>> vertices;  // n + 1 points in R^n
  int ideal_vertex = -1;
};

std::vector<KleinSimplex> SimplicesOf(const KleinPolytope& k);

// Replicated estimator for one simplex. A cusp vertex v is handled in cone
// coordinates x = v + t (y - v), y on the opposite face, where the density
// times the Jacobian factors as t^((n-3)/2) (a - b t)^(-(n+1)/2); t is cut
// into shells [2^-k-1, 2^-k] and the innermost region [0, 2^-K] is covered
// by a rigorous bound.
class SimplexIntegrator {
 public:
  SimplexIntegrator(KleinSimplex simplex, const VolumeOptions& options, std::uint64_t stream);
  ~SimplexIntegrator();
  SimplexIntegrator(SimplexIntegrator&&) noexcept;
  SimplexIntegrator& operator=(SimplexIntegrator&&) noexcept;

  // Raises the per-replicate point count of the outermost shell (or of the
  // whole simplex) to `points`.
  void Refine(std::uint64_t points);
  // Adds shells until the cusp tail bound is at most `max_tail`. Throws
  // kNonConvergent if that needs an implausible number of shells.
  void EnsureTail(double max_tail);

  bool has_cusp() const;
  std::uint64_t points() const;
  std::uint64_t samples() const;  // density evaluations so far
  double tail_bound() const;      // 0 without a cusp
  // Bound on the whole cusp-simplex integral; 0 without a cusp.
  double cusp_bound() const;
  std::vector<double> ReplicateValues() const;
  // Mean of replicates plus half the tail, and its standard error.
  double value() const;
  double standard_error() const;
  // abs_error is a Student t multiple of the standard error (the 3 sigma
  // level) plus half the tail.
  VolumeEstimate Estimate() const;

 private:
  double RawError() const;

  struct State;
  std::unique_ptr<State> state_;
};

// Adaptive single-simplex estimate: doubles the point count until the error
// is within `abs_budget` or the sample cap is reached.
VolumeEstimate SimplexVolume(const KleinSimplex& simplex, double abs_budget,
                             const VolumeOptions& options = {}, std::uint64_t stream = 0);

// Sum over the triangulation. Per-simplex error budgets are proportional to
// first-pass estimates; statistical errors combine in quadrature, tail
// bounds linearly. On hitting the sample cap the reported error stays honest.
VolumeEstimate PolytopeVolume(const KleinPolytope& k, const VolumeOptions& options = {});

}  // namespace hypvol
