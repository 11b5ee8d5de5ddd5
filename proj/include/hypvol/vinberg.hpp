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
#include <set>
#include <string_view>
#include <vector>

#include "hypvol/coxeter.hpp"

namespace hypvol {

// Simple cycle in the non-orthogonality graph together with the product of
// the doubled Gram entries along it. `cycle` is closed (first vertex
// repeated at the end); a 2-cycle i -> j -> i has value (2 G_ij)^2.
struct CyclicProduct {
  std::vector<int> cycle;
  MultiSurd value;
};

inline constexpr int kMaxCycleFacets = 12;

// Product of 2*G over the consecutive pairs of a closed vertex sequence.
MultiSurd CycleValue(const GramMatrix& gram, std::span<const int> closed_cycle);

// Every simple cycle, 2-cycles included, in a deterministic order (by length,
// then lexicographically in the canonical rotation). Throws kDisconnected /
// kTooLarge.
std::vector<CyclicProduct> EnumerateCycles(const GramMatrix& gram);

// Union of the radicands of all cyclic products; empty iff K = Q.
std::set<Radicand> FieldOfDefinition(const std::vector<CyclicProduct>& cycles);

// Parent pointers of a spanning tree of the non-orthogonality graph;
// parent[root] == -1.
using SpanningTree = std::vector<int>;

// Breadth-first tree rooted at facet 0, visiting neighbors in index order.
SpanningTree BreadthFirstTree(const GramMatrix& gram);

struct QuadraticForm {
  SurdMatrix matrix;              // (n+1) x (n+1)
  std::vector<int> basis_facets;  // facet indices of the rows
  std::vector<MultiSurd> scaling; // lambda_i for every facet
  SurdMatrix full;                // N x N rescaled Gram matrix
};

// Rescales the facet normals along the tree (lambda_root = 1, lambda_child =
// lambda_parent * 2 G_parent,child), verifies every rescaled entry lies in the
// field generated by `field`, and returns the first lexicographic nonsingular
// principal (n+1)-subblock. Throws kNotInField / kRankDeficient.
QuadraticForm RationalForm(const GramMatrix& gram, int dimension,
                           const std::set<Radicand>& field,
                           const SpanningTree& tree);
QuadraticForm RationalForm(const GramMatrix& gram, int dimension);

// Exact determinant of a square surd matrix.
MultiSurd Determinant(const SurdMatrix& matrix);

// Squarefree class of det(F); requires rational entries (kFieldNotQ).
Integer DiscriminantClass(const QuadraticForm& form);

// Squarefree part of (-1)^m det(F), m = (n+1)/2. Requires n odd and rational
// entries (kFieldNotQ, kInvalidArgument).
Integer DiscriminantDelta(const QuadraticForm& form, int dimension);

enum class Arithmeticity { kArithmetic, kProperlyQuasiArithmetic, kNotQuasiArithmetic };

std::string_view ArithmeticityName(Arithmeticity a);

struct ArithmeticityWitness {
  enum class Kind { kNonIntegralCycle, kIndefiniteConjugate };
  Kind kind;
  std::vector<int> cycle;             // kNonIntegralCycle
  MultiSurd value;                    // kNonIntegralCycle
  std::set<std::uint64_t> flip_primes;  // kIndefiniteConjugate
  Inertia conjugate_inertia;          // kIndefiniteConjugate
};

struct ArithmeticityReport {
  std::set<Radicand> field_generators;
  QuadraticForm form;
  std::optional<Integer> disc_class;  // K = Q only
  std::optional<Integer> delta;       // K = Q and n odd
  Arithmeticity classification = Arithmeticity::kNotQuasiArithmetic;
  std::vector<ArithmeticityWitness> witnesses;
  std::size_t cycle_count = 0;
};

// Vinberg's criterion: quasi-arithmetic iff every nontrivial Galois conjugate
// of the rescaled form is definite; arithmetic iff additionally every cyclic
// product is an algebraic integer. Throws kNotLorentzian when the diagram's
// Gram matrix does not have signature (n, 1, N-n-1).
ArithmeticityReport Classify(const GramMatrix& gram, int dimension);

}  // namespace hypvol
