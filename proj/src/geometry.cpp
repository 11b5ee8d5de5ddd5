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

#include "hypvol/geometry.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <numeric>
#include <set>

#include "hypvol/error.hpp"

namespace hypvol {

namespace {

Real Pow2(int e) { return ldexp(Real(1), e); }

// Cyclic Jacobi: a = V diag(w) V^T. Columns of v are eigenvectors.
void JacobiEigen(RealMatrix a, std::vector<Real>& w, RealMatrix& v, unsigned bits) {
  const std::size_t n = a.rows();
  v = RealMatrix::Identity(n);
  Real scale = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) scale += a(i, j) * a(i, j);
  const Real threshold = scale * Pow2(-2 * static_cast<int>(bits));
  for (int sweep = 0; sweep < 100; ++sweep) {
    Real off = 0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (off <= threshold) break;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        if (a(p, q) == 0) continue;
        const Real theta = (a(q, q) - a(p, p)) / (2 * a(p, q));
        const Real t = (theta >= 0 ? Real(1) : Real(-1)) / (abs(theta) + sqrt(theta * theta + 1));
        const Real c = 1 / sqrt(t * t + 1), s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const Real akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const Real apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const Real vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
  }
  w.resize(n);
  for (std::size_t k = 0; k < n; ++k) w[k] = a(k, k);
}

// Unique (up to scale) x with rows . x = 0, or empty if the rows have rank
// below cols - 1. Full pivoting Gaussian elimination.
RealVector NullLine(std::vector<RealVector> rows, const Real& rel_tol) {
  const std::size_t m = rows.size(), c = rows.front().size();
  std::vector<std::size_t> col(c);
  std::iota(col.begin(), col.end(), 0);
  Real scale = 0;
  for (const auto& r : rows)
    for (const Real& x : r) scale = std::max<Real>(scale, abs(x));
  if (scale == 0) return {};
  for (std::size_t k = 0; k < m; ++k) {
    std::size_t bi = k, bj = k;
    Real best = -1;
    for (std::size_t i = k; i < m; ++i)
      for (std::size_t j = k; j < c; ++j)
        if (abs(rows[i][col[j]]) > best) {
          best = abs(rows[i][col[j]]);
          bi = i;
          bj = j;
        }
    if (best <= rel_tol * scale) return {};
    std::swap(rows[k], rows[bi]);
    std::swap(col[k], col[bj]);
    for (std::size_t i = k + 1; i < m; ++i) {
      const Real f = rows[i][col[k]] / rows[k][col[k]];
      if (f == 0) continue;
      for (std::size_t j = k; j < c; ++j) rows[i][col[j]] -= f * rows[k][col[j]];
    }
  }
  // Free variables: columns m..c-1; only one when rank = c - 1.
  if (m + 1 != c) return {};
  RealVector x(c, Real(0));
  x[col[m]] = 1;
  for (std::size_t k = m; k-- > 0;) {
    Real acc = 0;
    for (std::size_t j = k + 1; j < c; ++j) acc += rows[k][col[j]] * x[col[j]];
    x[col[k]] = -acc / rows[k][col[k]];
  }
  return x;
}

RealVector Normalized(RealVector x) {
  Real norm = 0;
  for (const Real& v : x) norm += v * v;
  norm = sqrt(norm);
  for (Real& v : x) v /= norm;
  return x;
}

void ForEachSubset(int n, int k, auto&& fn) {
  std::vector<int> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  while (true) {
    fn(idx);
    int i = k - 1;
    while (i >= 0 && idx[i] == n - k + i) --i;
    if (i < 0) return;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

// Candidate vertices for one orientation of the normals.
std::vector<PolytopeVertex> CollectVertices(const PolytopeRealization& r, int& degenerate) {
  const int n = r.dimension;
  const int count = static_cast<int>(r.normals.size());
  const Real rank_tol = Pow2(-static_cast<int>(r.precision_bits) / 2);
  std::map<std::uint64_t, PolytopeVertex> found;
  degenerate = 0;
  ForEachSubset(count, n, [&](const std::vector<int>& subset) {
    std::vector<RealVector> rows;
    for (int i : subset) {
      RealVector row = r.normals[i];
      row[0] = -row[0];
      rows.push_back(std::move(row));
    }
    RealVector x = NullLine(rows, rank_tol);
    if (x.empty()) {
      ++degenerate;
      return;
    }
    x = Normalized(std::move(x));
    const Real q = Minkowski(x, x);
    if (q > r.tolerance) return;  // hyperideal
    if (x[0] < 0)
      for (Real& v : x) v = -v;
    std::uint64_t incidence = 0;
    for (int i = 0; i < count; ++i) {
      const Real s = Minkowski(x, r.normals[i]);
      if (s > r.tolerance) return;
      if (s >= -r.tolerance) incidence |= std::uint64_t{1} << i;
    }
    if (found.count(incidence)) return;
    PolytopeVertex v;
    v.ideal = q >= -r.tolerance;
    const Real s = v.ideal ? Real(1 / x[0]) : Real(1 / sqrt(-q));
    for (Real& c : x) c *= s;
    v.x = std::move(x);
    v.incidence = incidence;
    found.emplace(incidence, std::move(v));
  });
  std::vector<PolytopeVertex> out;
  for (auto& [mask, v] : found) out.push_back(std::move(v));
  std::stable_sort(out.begin(), out.end(),
                   [](const PolytopeVertex& a, const PolytopeVertex& b) { return !a.ideal && b.ideal; });
  return out;
}

}  // namespace

Real Minkowski(const RealVector& x, const RealVector& y) {
  Real s = -x[0] * y[0];
  for (std::size_t k = 1; k < x.size(); ++k) s += x[k] * y[k];
  return s;
}

RealMatrix ToRealMatrix(const GramMatrix& gram, unsigned bits) {
  ScopedPrecision precision(bits);
  RealMatrix out(gram.rows(), gram.cols());
  for (std::size_t i = 0; i < gram.rows(); ++i)
    for (std::size_t j = 0; j < gram.cols(); ++j) out(i, j) = gram(i, j).ToReal();
  return out;
}

int PolytopeRealization::finite_count() const {
  return static_cast<int>(std::count_if(vertices.begin(), vertices.end(),
                                        [](const PolytopeVertex& v) { return !v.ideal; }));
}

int PolytopeRealization::ideal_count() const {
  return static_cast<int>(vertices.size()) - finite_count();
}

Real DefaultTolerance(unsigned bits) {
  ScopedPrecision precision(bits);
  return Pow2(-static_cast<int>(40 * bits / 128));
}

PolytopeRealization Realize(const RealMatrix& gram, int dimension, unsigned bits) {
  if (bits < 64) throw Error(ErrorCode::kInvalidArgument, "precision must be at least 64 bits");
  const int count = static_cast<int>(gram.rows());
  if (count > 64) throw Error(ErrorCode::kTooLarge, "at most 64 facets are supported");
  ScopedPrecision precision(bits);
  std::vector<Real> w;
  RealMatrix v;
  JacobiEigen(gram, w, v, bits);

  Real largest = 0;
  for (const Real& x : w) largest = std::max<Real>(largest, abs(x));
  const Real zero_tol = largest * Pow2(-static_cast<int>(bits) / 2);
  std::vector<int> positive, negative;
  for (int k = 0; k < count; ++k) {
    if (w[k] > zero_tol) positive.push_back(k);
    else if (w[k] < -zero_tol) negative.push_back(k);
  }
  if (static_cast<int>(positive.size()) != dimension || negative.size() != 1)
    throw Error(ErrorCode::kNotLorentzian,
                "numeric signature (" + std::to_string(positive.size()) + "," +
                    std::to_string(negative.size()) + "," +
                    std::to_string(count - positive.size() - negative.size()) +
                    "), expected (" + std::to_string(dimension) + ",1," +
                    std::to_string(count - dimension - 1) + ")");

  PolytopeRealization r;
  r.dimension = dimension;
  r.precision_bits = bits;
  r.tolerance = DefaultTolerance(bits);
  r.normals.assign(count, RealVector(dimension + 1));
  const Real time_scale = sqrt(-w[negative[0]]);
  for (int i = 0; i < count; ++i) {
    r.normals[i][0] = time_scale * v(i, negative[0]);
    for (int k = 0; k < dimension; ++k) r.normals[i][k + 1] = sqrt(w[positive[k]]) * v(i, positive[k]);
  }
  r.reconstruction_residual = 0;
  for (int i = 0; i < count; ++i)
    for (int j = 0; j < count; ++j)
      r.reconstruction_residual =
          std::max<Real>(r.reconstruction_residual, abs(Minkowski(r.normals[i], r.normals[j]) - gram(i, j)));
  return r;
}

PolytopeRealization Realize(const GramMatrix& gram, int dimension, unsigned bits) {
  const int count = static_cast<int>(gram.rows());
  const Inertia inertia = Signature(gram);
  if (!IsLorentzian(inertia, dimension, count))
    throw Error(ErrorCode::kNotLorentzian,
                "signature (" + std::to_string(inertia.positive) + "," +
                    std::to_string(inertia.negative) + "," + std::to_string(inertia.zero) +
                    "), expected (" + std::to_string(dimension) + ",1," +
                    std::to_string(count - dimension - 1) + ")");
  return Realize(ToRealMatrix(gram, bits), dimension, bits);
}

void EnumerateVertices(PolytopeRealization& r) {
  ScopedPrecision precision(r.precision_bits);
  int degenerate = 0;
  std::vector<PolytopeVertex> vertices = CollectVertices(r, degenerate);
  if (static_cast<int>(vertices.size()) < r.dimension + 1) {
    // The cone may sit over the past sheet; a time reflection moves it.
    PolytopeRealization flipped = r;
    for (RealVector& e : flipped.normals) e[0] = -e[0];
    int flipped_degenerate = 0;
    std::vector<PolytopeVertex> other = CollectVertices(flipped, flipped_degenerate);
    if (other.size() > vertices.size()) {
      r.normals = std::move(flipped.normals);
      vertices = std::move(other);
    }
  }
  r.degenerate_subsets = degenerate;
  if (static_cast<int>(vertices.size()) < r.dimension + 1)
    throw Error(ErrorCode::kNoVertices,
                "found " + std::to_string(vertices.size()) + " vertices, need at least " +
                    std::to_string(r.dimension + 1));
  r.vertices = std::move(vertices);
}

bool KleinPolytope::Contains(const RealVector& y, const Real& slack) const {
  Real norm2 = 0;
  for (const Real& c : y) norm2 += c * c;
  if (norm2 > 1 + slack) return false;
  for (const HalfSpace& h : inequalities) {
    Real s = -h.b;
    for (std::size_t k = 0; k < y.size(); ++k) s += h.a[k] * y[k];
    if (s > slack) return false;
  }
  return true;
}

Real SimplexEuclideanVolume(const std::vector<RealVector>& points) {
  const std::size_t n = points.size() - 1;
  std::vector<RealVector> m(n, RealVector(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) m[i][k] = points[i + 1][k] - points[0][k];
  Real det = 1;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (abs(m[i][k]) > abs(m[p][k])) p = i;
    if (m[p][k] == 0) return 0;
    if (p != k) {
      std::swap(m[p], m[k]);
      det = -det;
    }
    det *= m[k][k];
    for (std::size_t i = k + 1; i < n; ++i) {
      const Real f = m[i][k] / m[k][k];
      for (std::size_t j = k; j < n; ++j) m[i][j] -= f * m[k][j];
    }
  }
  Real factorial = 1;
  for (std::size_t k = 2; k <= n; ++k) factorial *= Real(static_cast<unsigned>(k));
  return abs(det) / factorial;
}

namespace {

class Triangulator {
 public:
  explicit Triangulator(const PolytopeRealization& r) : r_(r) {}

  // Pulling triangulation of a face with the given (sorted) vertex list.
  const std::vector<std::vector<int>>& Face(const std::vector<int>& face, int dim) {
    auto it = memo_.find(face);
    if (it != memo_.end()) return it->second;
    std::vector<std::vector<int>> out;
    if (static_cast<int>(face.size()) == dim + 1) {
      out.push_back(face);
    } else {
      const int pivot = face.front();
      for (const std::vector<int>& sub : Facets(face, dim)) {
        if (std::binary_search(sub.begin(), sub.end(), pivot)) continue;
        for (const std::vector<int>& s : Face(sub, dim - 1)) {
          std::vector<int> cone = s;
          cone.insert(cone.begin(), pivot);
          out.push_back(std::move(cone));
        }
      }
      if (out.empty()) Fail("face with no facets avoiding its pivot");
    }
    return memo_.emplace(face, std::move(out)).first->second;
  }

  // Inclusion-maximal proper intersections of the face with facet
  // hyperplanes; these are exactly its facets.
  std::vector<std::vector<int>> Facets(const std::vector<int>& face, int dim) {
    std::uint64_t common = ~std::uint64_t{0};
    for (int v : face) common &= r_.vertices[v].incidence;
    std::set<std::vector<int>> candidates;
    for (std::size_t j = 0; j < r_.normals.size(); ++j) {
      if (common >> j & 1) continue;
      std::vector<int> sub;
      for (int v : face)
        if (r_.vertices[v].incidence >> j & 1) sub.push_back(v);
      if (!sub.empty()) candidates.insert(std::move(sub));
    }
    std::vector<std::vector<int>> out;
    for (const auto& c : candidates) {
      const bool maximal = std::none_of(candidates.begin(), candidates.end(), [&](const auto& d) {
        return d.size() > c.size() && std::includes(d.begin(), d.end(), c.begin(), c.end());
      });
      if (!maximal) continue;
      if (static_cast<int>(c.size()) < dim) Fail("facet with too few vertices");
      out.push_back(c);
    }
    return out;
  }

  [[noreturn]] static void Fail(const std::string& what) {
    throw Error(ErrorCode::kTriangulationFailure, what);
  }

 private:
  const PolytopeRealization& r_;
  std::map<std::vector<int>, std::vector<std::vector<int>>> memo_;
};

}  // namespace

KleinPolytope ToKlein(const PolytopeRealization& r) {
  const int n = r.dimension;
  if (static_cast<int>(r.vertices.size()) < n + 1)
    throw Error(ErrorCode::kNoVertices, "vertices must be enumerated before projection");
  ScopedPrecision precision(r.precision_bits);

  KleinPolytope k;
  k.dimension = n;
  for (const RealVector& e : r.normals) k.inequalities.push_back({RealVector(e.begin() + 1, e.end()), e[0]});
  for (const PolytopeVertex& v : r.vertices) {
    KleinPoint p;
    p.kind = v.ideal ? KleinPoint::Kind::kIdeal : KleinPoint::Kind::kFinite;
    for (int c = 1; c <= n; ++c) p.y.push_back(v.x[c] / v.x[0]);
    k.points.push_back(std::move(p));
  }
  k.vertex_count = static_cast<int>(k.points.size());

  Triangulator tri(r);
  std::vector<std::vector<int>> simplices;
  std::vector<int> all(k.vertex_count);
  std::iota(all.begin(), all.end(), 0);
  if (k.vertex_count == n + 1) {
    simplices.push_back(all);
  } else {
    KleinPoint centroid;
    centroid.kind = KleinPoint::Kind::kSteiner;
    centroid.y.assign(n, Real(0));
    for (int i = 0; i < k.vertex_count; ++i)
      for (int c = 0; c < n; ++c) centroid.y[c] += k.points[i].y[c];
    for (Real& c : centroid.y) c /= k.vertex_count;
    const int apex = static_cast<int>(k.points.size());
    k.points.push_back(std::move(centroid));
    for (const std::vector<int>& facet : tri.Facets(all, n))
      for (const std::vector<int>& s : tri.Face(facet, n - 1)) {
        std::vector<int> cone = s;
        cone.insert(cone.begin(), apex);
        simplices.push_back(std::move(cone));
      }
  }

  // Bisect along ideal-ideal edges until each simplex has at most one cusp.
  std::map<std::pair<int, int>, int> midpoints;
  while (!simplices.empty()) {
    std::vector<int> s = std::move(simplices.back());
    simplices.pop_back();
    std::vector<int> ideal_slots;
    for (std::size_t a = 0; a < s.size(); ++a)
      if (k.points[s[a]].kind == KleinPoint::Kind::kIdeal) ideal_slots.push_back(static_cast<int>(a));
    if (ideal_slots.size() <= 1) {
      k.simplices.push_back(std::move(s));
      continue;
    }
    const int a = s[ideal_slots[0]], b = s[ideal_slots[1]];
    const auto key = std::minmax(a, b);
    auto it = midpoints.find(key);
    if (it == midpoints.end()) {
      KleinPoint mid;
      mid.kind = KleinPoint::Kind::kSteiner;
      for (int c = 0; c < n; ++c) mid.y.push_back((k.points[a].y[c] + k.points[b].y[c]) / 2);
      it = midpoints.emplace(key, static_cast<int>(k.points.size())).first;
      k.points.push_back(std::move(mid));
    }
    std::vector<int> left = s, right = s;
    left[ideal_slots[1]] = it->second;
    right[ideal_slots[0]] = it->second;
    simplices.push_back(std::move(left));
    simplices.push_back(std::move(right));
  }
  // Fixed order independent of the splitting stack.
  std::sort(k.simplices.begin(), k.simplices.end());

  const Real degenerate = Pow2(-static_cast<int>(r.precision_bits) / 2);
  for (const std::vector<int>& s : k.simplices) {
    std::vector<RealVector> pts;
    for (int i : s) pts.push_back(k.points[i].y);
    if (SimplexEuclideanVolume(pts) <= degenerate)
      Triangulator::Fail("degenerate simplex in the triangulation");
  }
  return k;
}

nlohmann::json GeometryToJson(const PolytopeRealization& r, const KleinPolytope& k) {
  using nlohmann::json;
  auto vec = [](const RealVector& v) {
    json out = json::array();
    for (const Real& x : v) out.push_back(static_cast<double>(x));
    return out;
  };
  json normals = json::array();
  for (const RealVector& e : r.normals) normals.push_back(vec(e));
  json vertices = json::array();
  for (const PolytopeVertex& v : r.vertices) {
    json facets = json::array();
    for (std::size_t i = 0; i < r.normals.size(); ++i)
      if (v.incidence >> i & 1) facets.push_back(i);
    vertices.push_back({{"hyperboloid", vec(v.x)}, {"ideal", v.ideal}, {"facets", facets}});
  }
  json halfspaces = json::array();
  for (const HalfSpace& h : k.inequalities)
    halfspaces.push_back({{"a", vec(h.a)}, {"b", static_cast<double>(h.b)}});
  json points = json::array();
  for (const KleinPoint& p : k.points) {
    const char* kind = p.kind == KleinPoint::Kind::kFinite ? "finite"
                       : p.kind == KleinPoint::Kind::kIdeal ? "ideal"
                                                            : "steiner";
    points.push_back({{"y", vec(p.y)}, {"kind", kind}});
  }
  return {{"dimension", r.dimension},
          {"precision_bits", r.precision_bits},
          {"tolerance", static_cast<double>(r.tolerance)},
          {"reconstruction_residual", static_cast<double>(r.reconstruction_residual)},
          {"normals", normals},
          {"vertices", vertices},
          {"klein", {{"halfspaces", halfspaces}, {"points", points}, {"simplices", k.simplices}}}};
}

}  // namespace hypvol
