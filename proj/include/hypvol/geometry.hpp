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

// Numeric realization of a Coxeter polytope in the hyperboloid model
// R^{n,1} (coordinate 0 is time, <x,y> = -x0 y0 + sum x_k y_k) and its
// projection to the Klein ball.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "hypvol/coxeter.hpp"
#include "hypvol/matrix.hpp"
#include "hypvol/real.hpp"

namespace hypvol {

using RealVector = std::vector<Real>;
using RealMatrix = Matrix<Real>;

Real Minkowski(const RealVector& x, const RealVector& y);

RealMatrix ToRealMatrix(const GramMatrix& gram, unsigned bits);

struct PolytopeVertex {
  RealVector x;             // <x,x> = -1 (finite) or x0 = 1 (ideal); x0 > 0
  bool ideal = false;
  std::uint64_t incidence = 0;  // bit i set iff the vertex lies on facet i
};

struct PolytopeRealization {
  int dimension = 0;
  unsigned precision_bits = 128;
  std::vector<RealVector> normals;  // unit spacelike, outward: P = {<x,e_i> <= 0}
  std::vector<PolytopeVertex> vertices;  // finite vertices first
  Real tolerance;                   // light-cone and incidence band
  Real reconstruction_residual;     // max |<e_i,e_j> - G_ij|
  int degenerate_subsets = 0;       // n-subsets without a unique common line

  int finite_count() const;
  int ideal_count() const;
  bool compact() const { return ideal_count() == 0; }
};

// Default classification band: 2^-40 at 128 bits, scaled with precision.
Real DefaultTolerance(unsigned bits);

// Lorentzian frame from the eigendecomposition of the numeric Gram matrix;
// the null directions are dropped. Throws kNotLorentzian unless the
// signature is (n, 1, N - n - 1).
PolytopeRealization Realize(const RealMatrix& gram, int dimension, unsigned bits = 128);
PolytopeRealization Realize(const GramMatrix& gram, int dimension, unsigned bits = 128);

// Intersects every n-subset of facet hyperplanes, keeps the points of the
// polytope and sorts them finite-first. Reorients the normals by a time
// reflection if the polytope lies in the past sheet. Throws kNoVertices.
void EnumerateVertices(PolytopeRealization& r);

struct KleinPoint {
  enum class Kind { kFinite, kIdeal, kSteiner };
  RealVector y;
  Kind kind = Kind::kFinite;
};

struct HalfSpace {
  RealVector a;  // a . y <= b
  Real b;
};

struct KleinPolytope {
  int dimension = 0;
  std::vector<HalfSpace> inequalities;
  // The first vertex_count points are polytope vertices, in the order of the
  // realization; the rest are auxiliary (centroid, ideal-edge midpoints).
  std::vector<KleinPoint> points;
  int vertex_count = 0;
  std::vector<std::vector<int>> simplices;  // n + 1 point indices each

  bool Contains(const RealVector& y, const Real& slack) const;
};

// Central projection plus triangulation: a centroid Steiner point coned over
// pulling triangulations of the facets, with simplices carrying more than one
// ideal vertex bisected along ideal-ideal edges. Throws kTriangulationFailure.
KleinPolytope ToKlein(const PolytopeRealization& r);

// Euclidean volume of the simplex spanned by the given points.
Real SimplexEuclideanVolume(const std::vector<RealVector>& points);

nlohmann::json GeometryToJson(const PolytopeRealization& r, const KleinPolytope& k);

}  // namespace hypvol
