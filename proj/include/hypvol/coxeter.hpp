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

#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "hypvol/matrix.hpp"
#include "hypvol/surd.hpp"

namespace hypvol {

struct EdgeLabel {
  enum class Kind { kFinite, kInfinity, kDashed };

  Kind kind = Kind::kFinite;
  int order = 3;        // kFinite: dihedral angle pi/order
  MultiSurd weight;     // kDashed: magnitude of the Gram entry, > 1

  static EdgeLabel Finite(int m) { return {Kind::kFinite, m, {}}; }
  static EdgeLabel Infinity() { return {Kind::kInfinity, 0, {}}; }
  static EdgeLabel Dashed(MultiSurd w) { return {Kind::kDashed, 0, std::move(w)}; }

  std::string ToString() const;
  friend bool operator==(const EdgeLabel&, const EdgeLabel&) = default;
};

struct DiagramEdge {
  int i = 0;
  int j = 0;
  EdgeLabel label;
};

// Facet-adjacency graph of a hyperbolic Coxeter polytope. Absent edges mean
// orthogonal facets.
class CoxeterDiagram {
 public:
  // Validates the invariants; throws kSyntaxError / kUnsupportedLabel /
  // kBadWeight.
  CoxeterDiagram(int dimension, int facet_count, std::vector<DiagramEdge> edges);

  int dimension() const { return dimension_; }
  int facet_count() const { return facet_count_; }
  const std::vector<DiagramEdge>& edges() const { return edges_; }
  std::optional<EdgeLabel> label(int i, int j) const;

  // Diagram with facet perm[k] renamed to k.
  CoxeterDiagram Relabeled(std::span<const int> perm) const;

  // Diagram file text accepted by ParseDiagram.
  std::string ToText() const;

 private:
  int dimension_;
  int facet_count_;
  std::vector<DiagramEdge> edges_;
};

// Line-oriented diagram format: `n <dim>`, `facets <N>`, `edge <i> <j>
// <label>` with label in {3,4,5,6,inf,dashed <surd>}. `#` starts a comment;
// `;` also separates statements.
CoxeterDiagram ParseDiagram(std::string_view text);

using SurdMatrix = Matrix<MultiSurd>;
using GramMatrix = SurdMatrix;

// -cos(pi/m) for m in {2,3,4,5,6} as an exact surd.
MultiSurd MinusCosPiOver(int m);

GramMatrix BuildGramMatrix(const CoxeterDiagram& diagram);

struct Inertia {
  int positive = 0;
  int negative = 0;
  int zero = 0;
  friend bool operator==(const Inertia&, const Inertia&) = default;
};

// Exact inertia of a symmetric surd matrix by symmetric elimination in the
// surd field. A zero diagonal with a nonzero off-diagonal entry is repaired by
// adding one row/column to another before pivoting.
Inertia Signature(const SurdMatrix& matrix, const SignOptions& options = {});

// True iff the inertia is (n, 1, N - n - 1).
bool IsLorentzian(const Inertia& inertia, int dimension, int facet_count);

}  // namespace hypvol
