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

#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "hypvol/error.hpp"
#include "hypvol/geometry.hpp"
#include "oracles.hpp"

using namespace hypvol;

namespace {

GramMatrix GramOf(const char* file) {
  return BuildGramMatrix(ParseDiagram(oracle::ReadFile(oracle::DataPath(file))));
}

// Triangle with angles pi/p (facets 0,1), pi/q (1,2), pi/r (0,2).
RealMatrix TriangleGram(int p, int q, int r) {
  ScopedPrecision precision(128);
  Real pi;
  mpfr_const_pi(pi.backend().data(), MPFR_RNDN);
  RealMatrix g = RealMatrix::Identity(3);
  g(0, 1) = g(1, 0) = -cos(pi / p);
  g(1, 2) = g(2, 1) = -cos(pi / q);
  g(0, 2) = g(2, 0) = -cos(pi / r);
  return g;
}

PolytopeRealization Enumerated(const GramMatrix& g, int n) {
  PolytopeRealization r = Realize(g, n);
  EnumerateVertices(r);
  return r;
}

void CheckVerticesInside(const PolytopeRealization& r) {
  ScopedPrecision precision(r.precision_bits);
  for (const PolytopeVertex& v : r.vertices) {
    CHECK(v.x[0] > 0);
    const Real q = Minkowski(v.x, v.x);
    if (v.ideal) CHECK(abs(q) < r.tolerance);
    else CHECK(abs(q + 1) < r.tolerance);
    for (const RealVector& e : r.normals) CHECK(Minkowski(v.x, e) <= r.tolerance * 1e6);
  }
}

}  // namespace

TEST_CASE("identity Gram matrix is not Lorentzian") {
  try {
    Realize(RealMatrix::Identity(2), 1);
    FAIL("expected NotLorentzian");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kNotLorentzian);
  }
  CHECK_THROWS_AS(Realize(GramOf("right_angled_simplex.cox"), 3), Error);
}

TEST_CASE("(2,3,7) triangle realization and vertices") {
  PolytopeRealization r = Realize(TriangleGram(2, 3, 7), 2);
  CHECK(r.normals.size() == 3);
  CHECK(r.reconstruction_residual < Real("1e-20"));
  EnumerateVertices(r);
  CHECK(r.finite_count() == 3);
  CHECK(r.ideal_count() == 0);
  CHECK(r.compact());
  CheckVerticesInside(r);

  // Oracle: interior angles from the vertex positions by the hyperbolic law
  // of cosines reproduce the labels {pi/2, pi/3, pi/7}.
  std::vector<double> angles;
  for (int c = 0; c < 3; ++c) {
    const RealVector& C = r.vertices[c].x;
    const RealVector& A = r.vertices[(c + 1) % 3].x;
    const RealVector& B = r.vertices[(c + 2) % 3].x;
    const double ca = static_cast<double>(-Minkowski(C, B));  // cosh of side CB
    const double cb = static_cast<double>(-Minkowski(C, A));  // cosh of side CA
    const double cc = static_cast<double>(-Minkowski(A, B));
    const double sa = std::sqrt(ca * ca - 1), sb = std::sqrt(cb * cb - 1);
    angles.push_back(std::acos((ca * cb - cc) / (sa * sb)));
  }
  std::sort(angles.begin(), angles.end());
  CHECK(angles[0] == doctest::Approx(M_PI / 7).epsilon(1e-12));
  CHECK(angles[1] == doctest::Approx(M_PI / 3).epsilon(1e-12));
  CHECK(angles[2] == doctest::Approx(M_PI / 2).epsilon(1e-12));
}

TEST_CASE("ideal triangle has three ideal vertices") {
  const PolytopeRealization r = Enumerated(GramOf("ideal_triangle.cox"), 2);
  CHECK(r.finite_count() == 0);
  CHECK(r.ideal_count() == 3);
  CHECK_FALSE(r.compact());
  CheckVerticesInside(r);
}

TEST_CASE("P5 and P7 are realized and noncompact") {
  for (const auto& [file, n, facets] : {std::tuple{"p5.cox", 5, 8}, std::tuple{"p7.cox", 7, 10}}) {
    const PolytopeRealization r = Enumerated(GramOf(file), n);
    CHECK(r.normals.size() == static_cast<std::size_t>(facets));
    for (const RealVector& e : r.normals) CHECK(e.size() == static_cast<std::size_t>(n + 1));
    CHECK(r.reconstruction_residual < Real("1e-30"));
    CHECK(r.ideal_count() >= 1);
    CHECK_FALSE(r.compact());
    CheckVerticesInside(r);
    MESSAGE(std::string(file) << ": " << r.finite_count() << " finite, " << r.ideal_count() << " ideal vertices");
    // Each vertex lies on at least n facets whose normals span rank n.
    for (const PolytopeVertex& v : r.vertices) CHECK(std::popcount(v.incidence) >= n);
  }
}

TEST_CASE("vertex counts are invariant under a Lorentz boost") {
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> unit(-0.8, 0.8);
  PolytopeRealization base = Enumerated(GramOf("p5.cox"), 5);
  for (int trial = 0; trial < 3; ++trial) {
    PolytopeRealization r = Realize(GramOf("p5.cox"), 5);
    ScopedPrecision precision(r.precision_bits);
    const Real rapidity = unit(rng);
    const int axis = 1 + trial;
    for (RealVector& e : r.normals) {
      const Real t = e[0], x = e[axis];
      e[0] = cosh(rapidity) * t + sinh(rapidity) * x;
      e[axis] = sinh(rapidity) * t + cosh(rapidity) * x;
    }
    EnumerateVertices(r);
    CHECK(r.finite_count() == base.finite_count());
    CHECK(r.ideal_count() == base.ideal_count());
  }
}

TEST_CASE("Klein projection of simplices is a single simplex") {
  PolytopeRealization tri = Realize(TriangleGram(2, 3, 7), 2);
  EnumerateVertices(tri);
  const KleinPolytope k = ToKlein(tri);
  CHECK(k.simplices.size() == 1);
  CHECK(k.vertex_count == 3);

  const PolytopeRealization tet =
      Enumerated(BuildGramMatrix(ParseDiagram("n 3\nfacets 4\nedge 0 1 4\nedge 1 2 3\nedge 2 3 5")), 3);
  CHECK(tet.compact());
  CHECK(ToKlein(tet).simplices.size() == 1);
}

TEST_CASE("ideal triangle splits into single-cusp simplices") {
  const KleinPolytope k = ToKlein(Enumerated(GramOf("ideal_triangle.cox"), 2));
  CHECK(k.simplices.size() == 4);
  ScopedPrecision precision(128);
  Real total = 0;
  for (const auto& s : k.simplices) {
    int ideal = 0;
    std::vector<RealVector> pts;
    for (int i : s) {
      ideal += k.points[i].kind == KleinPoint::Kind::kIdeal;
      pts.push_back(k.points[i].y);
    }
    CHECK(ideal <= 1);
    total += SimplexEuclideanVolume(pts);
  }
  // Oracle: the Euclidean triangle on three unit-circle points; its area is
  // half the absolute cross product of two edges.
  const auto& a = k.points[0].y;
  const auto& b = k.points[1].y;
  const auto& c = k.points[2].y;
  const Real area = abs((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])) / 2;
  CHECK(abs(total - area) < Real("1e-30"));
}

TEST_CASE("P5 triangulation volume matches rejection sampling") {
  const PolytopeRealization r = Enumerated(GramOf("p5.cox"), 5);
  const KleinPolytope k = ToKlein(r);
  const int n = 5;
  ScopedPrecision precision(128);

  Real total = 0;
  for (const auto& s : k.simplices) {
    int ideal = 0;
    std::vector<RealVector> pts;
    for (int i : s) {
      ideal += k.points[i].kind == KleinPoint::Kind::kIdeal;
      pts.push_back(k.points[i].y);
      CHECK(k.Contains(k.points[i].y, Real("1e-20")));
    }
    CHECK(ideal <= 1);
    CHECK(SimplexEuclideanVolume(pts) > 0);
    total += SimplexEuclideanVolume(pts);
  }
  MESSAGE("P5: " << k.vertex_count << " vertices, " << k.simplices.size() << " simplices");

  // Rejection oracle in double against the H-representation.
  std::vector<double> lo(n, 1e9), hi(n, -1e9);
  for (int i = 0; i < k.vertex_count; ++i)
    for (int c = 0; c < n; ++c) {
      lo[c] = std::min(lo[c], static_cast<double>(k.points[i].y[c]));
      hi[c] = std::max(hi[c], static_cast<double>(k.points[i].y[c]));
    }
  std::vector<std::vector<double>> a;
  std::vector<double> b;
  for (const HalfSpace& h : k.inequalities) {
    std::vector<double> row;
    for (const Real& x : h.a) row.push_back(static_cast<double>(x));
    a.push_back(row);
    b.push_back(static_cast<double>(h.b));
  }
  std::mt19937_64 rng(1234);
  std::uniform_real_distribution<double> u(0, 1);
  const long samples = 4000000;
  long hits = 0;
  std::vector<double> y(n);
  for (long s = 0; s < samples; ++s) {
    for (int c = 0; c < n; ++c) y[c] = lo[c] + (hi[c] - lo[c]) * u(rng);
    bool inside = true;
    for (std::size_t f = 0; f < a.size() && inside; ++f) {
      double dot = 0;
      for (int c = 0; c < n; ++c) dot += a[f][c] * y[c];
      inside = dot <= b[f];
    }
    hits += inside;
  }
  double box = 1;
  for (int c = 0; c < n; ++c) box *= hi[c] - lo[c];
  const double frac = static_cast<double>(hits) / samples;
  const double estimate = box * frac;
  const double sigma = box * std::sqrt(frac * (1 - frac) / samples);
  const double tri_volume = static_cast<double>(total);
  MESSAGE("triangulated " << tri_volume << " vs sampled " << estimate << " +- " << sigma);
  CHECK(std::abs(tri_volume - estimate) <= 3 * sigma);
  CHECK(std::abs(tri_volume - estimate) <= 5e-3 * estimate);
}

TEST_CASE("P7 triangulation is valid") {
  const KleinPolytope k = ToKlein(Enumerated(GramOf("p7.cox"), 7));
  MESSAGE("P7: " << k.vertex_count << " vertices, " << k.simplices.size() << " simplices");
  for (const auto& s : k.simplices) {
    CHECK(s.size() == 8);
    int ideal = 0;
    for (int i : s) ideal += k.points[i].kind == KleinPoint::Kind::kIdeal;
    CHECK(ideal <= 1);
  }
}

TEST_CASE("geometry JSON dump") {
  const PolytopeRealization r = Enumerated(GramOf("ideal_triangle.cox"), 2);
  const nlohmann::json j = GeometryToJson(r, ToKlein(r));
  CHECK(j["dimension"] == 2);
  CHECK(j["normals"].size() == 3);
  CHECK(j["vertices"].size() == 3);
  CHECK(j["vertices"][0]["ideal"] == true);
  CHECK(j["klein"]["simplices"].size() == 4);
  CHECK(j["klein"]["halfspaces"].size() == 3);
}
