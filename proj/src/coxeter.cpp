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

#include "hypvol/coxeter.hpp"

#include <algorithm>
#include <charconv>
#include <set>
#include <sstream>

#include "hypvol/error.hpp"

namespace hypvol {

std::string EdgeLabel::ToString() const {
  switch (kind) {
    case Kind::kFinite: return std::to_string(order);
    case Kind::kInfinity: return "inf";
    case Kind::kDashed: return "dashed " + weight.ToString();
  }
  return "?";
}

CoxeterDiagram::CoxeterDiagram(int dimension, int facet_count,
                               std::vector<DiagramEdge> edges)
    : dimension_(dimension), facet_count_(facet_count), edges_(std::move(edges)) {
  if (dimension_ < 2)
    throw Error(ErrorCode::kSyntaxError, "dimension must be at least 2");
  if (facet_count_ < dimension_ + 1)
    throw Error(ErrorCode::kSyntaxError, "need at least n+1 facets");
  std::set<std::pair<int, int>> seen;
  for (DiagramEdge& e : edges_) {
    if (e.i < 0 || e.j < 0 || e.i >= facet_count_ || e.j >= facet_count_)
      throw Error(ErrorCode::kSyntaxError,
                  "edge index out of range: " + std::to_string(e.i) + " " +
                      std::to_string(e.j));
    if (e.i == e.j)
      throw Error(ErrorCode::kSyntaxError, "self-loop on facet " + std::to_string(e.i));
    if (e.i > e.j) std::swap(e.i, e.j);
    if (!seen.emplace(e.i, e.j).second)
      throw Error(ErrorCode::kSyntaxError,
                  "duplicate edge " + std::to_string(e.i) + " " + std::to_string(e.j));
    switch (e.label.kind) {
      case EdgeLabel::Kind::kFinite:
        if (e.label.order < 3 || e.label.order > 6)
          throw Error(ErrorCode::kUnsupportedLabel,
                      "dihedral order " + std::to_string(e.label.order) +
                          " (supported: 3, 4, 5, 6)");
        break;
      case EdgeLabel::Kind::kInfinity:
        break;
      case EdgeLabel::Kind::kDashed: {
        const int s = Sign(e.label.weight - MultiSurd(1));
        if (s == 0)
          throw Error(ErrorCode::kBadWeight, "dashed weight 1; use 'inf' for parallel facets");
        if (s < 0)
          throw Error(ErrorCode::kBadWeight,
                      "dashed weight " + e.label.weight.ToString() + " is not > 1");
        break;
      }
    }
  }
  std::sort(edges_.begin(), edges_.end(), [](const DiagramEdge& a, const DiagramEdge& b) {
    return std::pair(a.i, a.j) < std::pair(b.i, b.j);
  });
}

std::optional<EdgeLabel> CoxeterDiagram::label(int i, int j) const {
  if (i > j) std::swap(i, j);
  for (const DiagramEdge& e : edges_)
    if (e.i == i && e.j == j) return e.label;
  return std::nullopt;
}

CoxeterDiagram CoxeterDiagram::Relabeled(std::span<const int> perm) const {
  if (static_cast<int>(perm.size()) != facet_count_)
    throw Error(ErrorCode::kInvalidArgument, "permutation size mismatch");
  std::vector<int> inverse(facet_count_, -1);
  for (int k = 0; k < facet_count_; ++k) inverse.at(perm[k]) = k;
  std::vector<DiagramEdge> edges;
  for (const DiagramEdge& e : edges_) edges.push_back({inverse[e.i], inverse[e.j], e.label});
  return CoxeterDiagram(dimension_, facet_count_, std::move(edges));
}

std::string CoxeterDiagram::ToText() const {
  std::ostringstream os;
  os << "n " << dimension_ << "\nfacets " << facet_count_ << "\n";
  for (const DiagramEdge& e : edges_)
    os << "edge " << e.i << " " << e.j << " " << e.label.ToString() << "\n";
  return os.str();
}

namespace {

int ParseInt(const std::string& token, const std::string& line) {
  int value = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size())
    throw Error(ErrorCode::kSyntaxError, "expected integer, got '" + token + "' in: " + line);
  return value;
}

}  // namespace

CoxeterDiagram ParseDiagram(std::string_view text) {
  std::optional<int> dimension;
  std::optional<int> facets;
  std::vector<DiagramEdge> edges;

  std::string normalized(text);
  std::replace(normalized.begin(), normalized.end(), ';', '\n');
  std::istringstream lines(normalized);
  std::string line;
  while (std::getline(lines, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream tokens(line);
    std::string keyword;
    if (!(tokens >> keyword)) continue;
    std::vector<std::string> args;
    for (std::string t; tokens >> t;) args.push_back(t);

    if (keyword == "n" || keyword == "facets") {
      if (args.size() != 1)
        throw Error(ErrorCode::kSyntaxError, "expected one value: " + line);
      auto& slot = keyword == "n" ? dimension : facets;
      if (slot) throw Error(ErrorCode::kSyntaxError, "repeated '" + keyword + "'");
      slot = ParseInt(args[0], line);
    } else if (keyword == "edge") {
      if (args.size() < 3) throw Error(ErrorCode::kSyntaxError, "malformed edge: " + line);
      DiagramEdge edge{ParseInt(args[0], line), ParseInt(args[1], line), {}};
      if (args[2] == "inf") {
        if (args.size() != 3) throw Error(ErrorCode::kSyntaxError, "malformed edge: " + line);
        edge.label = EdgeLabel::Infinity();
      } else if (args[2] == "dashed") {
        std::string literal;
        for (std::size_t k = 3; k < args.size(); ++k) literal += args[k];
        if (literal.empty())
          throw Error(ErrorCode::kBadWeight, "dashed edge without weight: " + line);
        try {
          edge.label = EdgeLabel::Dashed(ParseSurd(literal));
        } catch (const Error& e) {
          throw Error(ErrorCode::kBadWeight, "dashed weight is not a surd: " + literal);
        }
      } else {
        if (args.size() != 3) throw Error(ErrorCode::kSyntaxError, "malformed edge: " + line);
        edge.label = EdgeLabel::Finite(ParseInt(args[2], line));
      }
      edges.push_back(std::move(edge));
    } else {
      throw Error(ErrorCode::kSyntaxError, "unknown keyword '" + keyword + "'");
    }
  }
  if (!dimension || !facets)
    throw Error(ErrorCode::kSyntaxError, "diagram needs both 'n' and 'facets'");
  return CoxeterDiagram(*dimension, *facets, std::move(edges));
}

MultiSurd MinusCosPiOver(int m) {
  switch (m) {
    case 2: return MultiSurd();
    case 3: return MultiSurd(Rational(-1, 2));
    case 4: return MultiSurd::Monomial(Rational(-1, 2), 2);
    case 5: return MultiSurd(Rational(-1, 4)) + MultiSurd::Monomial(Rational(-1, 4), 5);
    case 6: return MultiSurd::Monomial(Rational(-1, 2), 3);
    default:
      throw Error(ErrorCode::kUnsupportedLabel, "cos(pi/" + std::to_string(m) + ")");
  }
}

GramMatrix BuildGramMatrix(const CoxeterDiagram& diagram) {
  const int size = diagram.facet_count();
  GramMatrix gram(size, size);
  for (int i = 0; i < size; ++i) gram(i, i) = MultiSurd(1);
  for (const DiagramEdge& e : diagram.edges()) {
    MultiSurd entry;
    switch (e.label.kind) {
      case EdgeLabel::Kind::kFinite: entry = MinusCosPiOver(e.label.order); break;
      case EdgeLabel::Kind::kInfinity: entry = MultiSurd(-1); break;
      case EdgeLabel::Kind::kDashed: entry = -e.label.weight; break;
    }
    gram(e.i, e.j) = entry;
    gram(e.j, e.i) = entry;
  }
  return gram;
}

Inertia Signature(const SurdMatrix& matrix, const SignOptions& options) {
  SurdMatrix a = matrix;
  std::vector<int> active(a.rows());
  for (std::size_t k = 0; k < active.size(); ++k) active[k] = static_cast<int>(k);
  Inertia out;

  while (!active.empty()) {
    auto pivot = std::find_if(active.begin(), active.end(),
                              [&](int k) { return !a(k, k).is_zero(); });
    if (pivot == active.end()) {
      // All remaining diagonal entries vanish. Adding row/column l to j makes
      // the (j,j) entry 2*a(j,l).
      std::optional<std::pair<int, int>> found;
      for (int j : active) {
        for (int l : active)
          if (j != l && !a(j, l).is_zero()) {
            found = {j, l};
            break;
          }
        if (found) break;
      }
      if (!found) {
        out.zero += static_cast<int>(active.size());
        break;
      }
      const auto [j, l] = *found;
      for (int c : active) a(j, c) += a(l, c);
      for (int r : active) a(r, j) += a(r, l);
      pivot = std::find(active.begin(), active.end(), j);
    }
    const int k = *pivot;
    const MultiSurd p = a(k, k);
    (Sign(p, options) > 0 ? out.positive : out.negative) += 1;
    active.erase(pivot);
    const MultiSurd inv = p.Inverse();
    std::vector<MultiSurd> scaled(a.rows());
    for (int r : active) scaled[r] = a(r, k) * inv;
    for (std::size_t ia = 0; ia < active.size(); ++ia) {
      const int r = active[ia];
      if (a(r, k).is_zero()) continue;
      for (std::size_t ib = ia; ib < active.size(); ++ib) {
        const int c = active[ib];
        if (a(k, c).is_zero()) continue;
        a(r, c) -= scaled[r] * a(k, c);
        if (r != c) a(c, r) = a(r, c);
      }
    }
  }
  return out;
}

bool IsLorentzian(const Inertia& inertia, int dimension, int facet_count) {
  return inertia.positive == dimension && inertia.negative == 1 &&
         inertia.zero == facet_count - dimension - 1;
}

}  // namespace hypvol
