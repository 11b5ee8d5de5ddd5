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

#include <cmath>
#include <random>

#include "doctest.h"
#include "hypvol/error.hpp"
#include "hypvol/volume.hpp"
#include "oracles.hpp"

using namespace hypvol;

namespace {

KleinPolytope KleinOf(const GramMatrix& g, int n) {
  PolytopeRealization r = Realize(g, n);
  EnumerateVertices(r);
  return ToKlein(r);
}

KleinPolytope KleinOf(const char* file, int n) {
  return KleinOf(BuildGramMatrix(ParseDiagram(oracle::ReadFile(oracle::DataPath(file)))), n);
}

KleinPolytope TriangleKlein(int p, int q, int r) {
  ScopedPrecision precision(128);
  Real pi;
  mpfr_const_pi(pi.backend().data(), MPFR_RNDN);
  RealMatrix g = RealMatrix::Identity(3);
  g(0, 1) = g(1, 0) = -cos(pi / p);
  g(1, 2) = g(2, 1) = -cos(pi / q);
  g(0, 2) = g(2, 0) = -cos(pi / r);
  PolytopeRealization real = Realize(g, 2);
  EnumerateVertices(real);
  return ToKlein(real);
}

// Gauss-Bonnet oracle: lift Klein points to the hyperboloid and read the
// angles off the hyperbolic law of cosines.
double TriangleArea(const std::vector<std::vector<double>>& y) {
  std::vector<std::array<double, 3>> x;
  for (const auto& p : y) {
    const double s = 1 / std::sqrt(1 - p[0] * p[0] - p[1] * p[1]);
    x.push_back({s, s * p[0], s * p[1]});
  }
  auto ch = [&](int i, int j) { return x[i][0] * x[j][0] - x[i][1] * x[j][1] - x[i][2] * x[j][2]; };
  double angles = 0;
  for (int c = 0; c < 3; ++c) {
    const int a = (c + 1) % 3, b = (c + 2) % 3;
    const double ca = ch(c, b), cb = ch(c, a), cc = ch(a, b);
    angles += std::acos((ca * cb - cc) / (std::sqrt(ca * ca - 1) * std::sqrt(cb * cb - 1)));
  }
  return M_PI - angles;
}

double EuclideanVolume(const std::vector<std::vector<double>>& p) {
  ScopedPrecision precision(128);
  std::vector<RealVector> pts;
  for (const auto& v : p) pts.emplace_back(v.begin(), v.end());
  return static_cast<double>(SimplexEuclideanVolume(pts));
}

}  // namespace

TEST_CASE("(2,3,7) triangle area") {
  const VolumeEstimate e = PolytopeVolume(TriangleKlein(2, 3, 7), {.target_rel_error = 1e-6});
  CHECK(e.value == doctest::Approx(M_PI / 42).epsilon(1e-4));
  CHECK(std::abs(e.value - M_PI / 42) <= e.abs_error);
  CHECK(e.strategy == Strategy::kQMC);
  CHECK(e.rel_error <= 1e-6);
}

TEST_CASE("ideal triangle area") {
  const VolumeEstimate e = PolytopeVolume(KleinOf("ideal_triangle.cox", 2), {.target_rel_error = 1e-5});
  MESSAGE("ideal triangle " << e.value << " +- " << e.abs_error << " samples " << e.samples);
  CHECK(e.value == doctest::Approx(M_PI).epsilon(1e-3));
  CHECK(std::abs(e.value - M_PI) <= e.abs_error);
  CHECK(e.strategy == Strategy::kSubdivision);
}

TEST_CASE("Gauss-Bonnet on random triangles") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> coord(-0.6, 0.6);
  for (int trial = 0; trial < 20; ++trial) {
    KleinSimplex s;
    for (int v = 0; v < 3; ++v) s.vertices.push_back({coord(rng), coord(rng)});
    const double area = TriangleArea(s.vertices);
    if (EuclideanVolume(s.vertices) < 1e-3) continue;
    const VolumeEstimate e = SimplexVolume(s, 1e-6 * area, {.max_samples = 1 << 24}, trial);
    CHECK(std::abs(e.value - area) <= e.abs_error + 1e-12);
    CHECK(e.value == doctest::Approx(area).epsilon(1e-5));
  }
}

TEST_CASE("cusp simplices in the plane") {
  // Triangle (v, p, q) with v on the circle: angle 0 at v, so Gauss-Bonnet
  // still applies with the two finite angles.
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> ang(0, 2 * M_PI), rad(0, 0.7);
  for (int trial = 0; trial < 10; ++trial) {
    const double th = ang(rng);
    KleinSimplex s;
    s.vertices.push_back({std::cos(th), std::sin(th)});
    for (int v = 0; v < 2; ++v) {
      const double phi = ang(rng), r = rad(rng);
      s.vertices.push_back({r * std::cos(phi), r * std::sin(phi)});
    }
    s.ideal_vertex = 0;
    if (EuclideanVolume(s.vertices) < 1e-2) continue;
    // Angles at the finite vertices of a one-cusp triangle, from the
    // hyperboloid lifts and the limiting cosine rule for an ideal point.
    std::vector<std::array<double, 3>> x;
    for (int i = 0; i < 3; ++i) {
      const auto& p = s.vertices[i];
      const double w = i == 0 ? 1.0 : 1 / std::sqrt(1 - p[0] * p[0] - p[1] * p[1]);
      x.push_back({w, w * p[0], w * p[1]});
    }
    auto ip = [&](int i, int j) { return x[i][0] * x[j][0] - x[i][1] * x[j][1] - x[i][2] * x[j][2]; };
    // For an ideal v, cos(angle at p) = (cosh(pq) (v.p) - (v.q)) / (sinh(pq) (v.p)).
    double angles = 0;
    for (const auto& [p, q] : {std::pair{1, 2}, std::pair{2, 1}}) {
      const double c = ip(p, q), sh = std::sqrt(c * c - 1);
      angles += std::acos((c * ip(0, p) - ip(0, q)) / (sh * ip(0, p)));
    }
    const double area = M_PI - angles;
    const VolumeEstimate e = SimplexVolume(s, 1e-6 * area, {.max_samples = 1 << 24}, trial);
    CHECK(std::abs(e.value - area) <= e.abs_error + 1e-12);
    CHECK(e.value == doctest::Approx(area).epsilon(1e-5));
  }
}

TEST_CASE("small simplex near the origin is nearly Euclidean") {
  for (int n : {3, 5, 7}) {
    KleinSimplex s;
    s.vertices.assign(n + 1, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i) s.vertices[i + 1][i] = 0.01;
    double factorial = 1;
    for (int k = 2; k <= n; ++k) factorial *= k;
    const double euclid = std::pow(0.01, n) / factorial;
    // The density lies between 1 and (1 - r^2)^(-(n+1)/2) for r = 0.01.
    const double upper = euclid * std::pow(1 - 1e-4, -(n + 1) / 2.0);
    const VolumeEstimate e = SimplexVolume(s, 1e-6 * euclid, {.max_samples = 1 << 22});
    CHECK(e.value >= euclid - e.abs_error);
    CHECK(e.value <= upper + e.abs_error);
    MESSAGE("n=" << n << " rel error " << e.abs_error / euclid);
    CHECK(e.abs_error <= 1e-5 * euclid);
  }
}

TEST_CASE("bisection additivity") {
  const KleinPolytope k = KleinOf("p5.cox", 5);
  const std::vector<KleinSimplex> simplices = SimplicesOf(k);
  for (std::size_t idx : {std::size_t{0}, simplices.size() / 2, simplices.size() - 1}) {
    const KleinSimplex& s = simplices[idx];
    const VolumeOptions options{.max_samples = 1 << 24};
    const VolumeEstimate whole = SimplexVolume(s, 5e-8, options, 0);
    // Split the edge between vertices 1 and 2 at its midpoint; the cusp (if
    // any) lands in at most one slot per half.
    std::vector<double> mid(5);
    for (int c = 0; c < 5; ++c) mid[c] = (s.vertices[1][c] + s.vertices[2][c]) / 2;
    KleinSimplex left = s, right = s;
    left.vertices[2] = mid;
    right.vertices[1] = mid;
    if (left.ideal_vertex == 2) left.ideal_vertex = -1;
    if (right.ideal_vertex == 1) right.ideal_vertex = -1;
    const VolumeEstimate a = SimplexVolume(left, 5e-8, options, 1);
    const VolumeEstimate b = SimplexVolume(right, 5e-8, options, 2);
    CHECK(std::abs(a.value + b.value - whole.value) <= a.abs_error + b.abs_error + whole.abs_error);
  }
}

TEST_CASE("volume is invariant under a Lorentz boost") {
  const GramMatrix g = BuildGramMatrix(ParseDiagram(oracle::ReadFile(oracle::DataPath("p5.cox"))));
  const VolumeOptions options{.target_rel_error = 2e-4};
  const VolumeEstimate base = PolytopeVolume(KleinOf(g, 5), options);
  for (int axis : {1, 3}) {
    PolytopeRealization r = Realize(g, 5);
    {
      ScopedPrecision precision(r.precision_bits);
      const Real rapidity = axis == 1 ? Real("0.7") : Real("-0.4");
      for (RealVector& e : r.normals) {
        const Real t = e[0], x = e[axis];
        e[0] = cosh(rapidity) * t + sinh(rapidity) * x;
        e[axis] = sinh(rapidity) * t + cosh(rapidity) * x;
      }
    }
    EnumerateVertices(r);
    const VolumeEstimate moved = PolytopeVolume(ToKlein(r), options);
    CHECK(std::abs(moved.value - base.value) <= moved.abs_error + base.abs_error);
  }
}

TEST_CASE("QMC convergence order on a compact simplex") {
  KleinSimplex s{{{0.1, -0.2, 0.05}, {0.5, 0.1, 0.0}, {-0.1, 0.45, 0.2}, {0.05, 0.1, -0.55}}, -1};
  SimplexIntegrator reference(s, {.replicates = 8}, 99);
  reference.Refine(std::uint64_t{1} << 20);
  const double truth = reference.value();
  auto rms = [&](std::uint64_t points) {
    SimplexIntegrator it(s, {.replicates = 16}, 5);
    it.Refine(points);
    double acc = 0;
    for (double v : it.ReplicateValues()) acc += (v - truth) * (v - truth);
    return std::sqrt(acc / 16);
  };
  const double coarse = rms(1 << 10), fine = rms(1 << 12);
  MESSAGE("rms error " << coarse << " -> " << fine);
  CHECK(coarse / fine >= 2);
}

TEST_CASE("seeded determinism") {
  const KleinPolytope k = KleinOf("p5.cox", 5);
  const VolumeOptions options{.target_rel_error = 1e-3, .seed = 42};
  const VolumeEstimate a = PolytopeVolume(k, options);
  const VolumeEstimate b = PolytopeVolume(k, options);
  CHECK(a.value == b.value);
  CHECK(a.abs_error == b.abs_error);
  CHECK(a.samples == b.samples);
  VolumeOptions threaded = options;
  threaded.threads = 3;
  const VolumeEstimate c = PolytopeVolume(k, threaded);
  CHECK(c.value == a.value);
  CHECK(c.abs_error == a.abs_error);
}

TEST_CASE("pseudo-random sampler agrees") {
  const VolumeEstimate e = PolytopeVolume(TriangleKlein(2, 3, 7), {.target_rel_error = 1e-3, .sampler = Strategy::kMC});
  CHECK(e.strategy == Strategy::kMC);
  CHECK(std::abs(e.value - M_PI / 42) <= e.abs_error);
}

TEST_CASE("full P5 volume") {
  const VolumeEstimate e = PolytopeVolume(KleinOf("p5.cox", 5), {.target_rel_error = 2e-4});
  MESSAGE("P5 " << e.value << " +- " << e.abs_error << " samples " << e.samples);
  CHECK(e.value == doctest::Approx(0.0241330688).epsilon(1e-3));
  CHECK(std::abs(e.value - 0.0241330687945822699990) <= e.abs_error);
}

TEST_CASE("misclassified cusp is reported") {
  KleinSimplex s{{{1.0, 0.0}, {0.0, 1.0}, {0.0, 0.0}}, 0};
  try {
    SimplexVolume(s, 1e-6);
    FAIL("expected NonConvergent");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kNonConvergent);
  }
}
