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

#include "hypvol/vinberg.hpp"

#include <algorithm>
#include <deque>
#include <functional>

#include "hypvol/error.hpp"

namespace hypvol {

namespace {

std::vector<std::vector<int>> Adjacency(const GramMatrix& gram) {
  const int size = static_cast<int>(gram.rows());
  std::vector<std::vector<int>> adj(size);
  for (int i = 0; i < size; ++i)
    for (int j = 0; j < size; ++j)
      if (i != j && !gram(i, j).is_zero()) adj[i].push_back(j);
  return adj;
}

void RequireConnected(const std::vector<std::vector<int>>& adj) {
  std::vector<bool> seen(adj.size(), false);
  std::vector<int> stack{0};
  seen[0] = true;
  std::size_t count = 1;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (int w : adj[v])
      if (!seen[w]) {
        seen[w] = true;
        ++count;
        stack.push_back(w);
      }
  }
  if (count != adj.size())
    throw Error(ErrorCode::kDisconnected, "non-orthogonality graph is disconnected");
}

}  // namespace

MultiSurd CycleValue(const GramMatrix& gram, std::span<const int> closed_cycle) {
  MultiSurd value(1);
  for (std::size_t k = 0; k + 1 < closed_cycle.size(); ++k)
    value *= MultiSurd(2) * gram(closed_cycle[k], closed_cycle[k + 1]);
  return value;
}

std::vector<CyclicProduct> EnumerateCycles(const GramMatrix& gram) {
  const int size = static_cast<int>(gram.rows());
  if (size > kMaxCycleFacets)
    throw Error(ErrorCode::kTooLarge, std::to_string(size) + " facets (limit " +
                                          std::to_string(kMaxCycleFacets) + ")");
  if (size == 0) return {};
  const auto adj = Adjacency(gram);
  RequireConnected(adj);

  std::vector<std::vector<int>> cycles;
  for (int i = 0; i < size; ++i)
    for (int j : adj[i])
      if (i < j) cycles.push_back({i, j, i});

  // Cycles of length >= 3 rooted at their smallest vertex, each found once by
  // requiring path[1] < path.back().
  std::vector<int> path;
  std::vector<bool> on_path(size, false);
  std::function<void(int, int)> extend = [&](int start, int v) {
    for (int w : adj[v]) {
      if (w == start && path.size() >= 3 && path[1] < path.back()) {
        std::vector<int> closed = path;
        closed.push_back(start);
        cycles.push_back(std::move(closed));
      } else if (w > start && !on_path[w]) {
        on_path[w] = true;
        path.push_back(w);
        extend(start, w);
        path.pop_back();
        on_path[w] = false;
      }
    }
  };
  for (int start = 0; start < size; ++start) {
    path = {start};
    on_path[start] = true;
    extend(start, start);
    on_path[start] = false;
  }

  std::sort(cycles.begin(), cycles.end(), [](const auto& a, const auto& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  std::vector<CyclicProduct> out;
  out.reserve(cycles.size());
  for (auto& c : cycles) {
    MultiSurd value = CycleValue(gram, c);
    out.push_back({std::move(c), std::move(value)});
  }
  return out;
}

std::set<Radicand> FieldOfDefinition(const std::vector<CyclicProduct>& cycles) {
  std::set<Radicand> out;
  for (const CyclicProduct& c : cycles) {
    const auto r = c.value.radicands();
    out.insert(r.begin(), r.end());
  }
  return out;
}

SpanningTree BreadthFirstTree(const GramMatrix& gram) {
  const auto adj = Adjacency(gram);
  RequireConnected(adj);
  SpanningTree parent(gram.rows(), -2);
  parent[0] = -1;
  std::deque<int> queue{0};
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop_front();
    for (int w : adj[v])
      if (parent[w] == -2) {
        parent[w] = v;
        queue.push_back(w);
      }
  }
  return parent;
}

MultiSurd Determinant(const SurdMatrix& matrix) {
  SurdMatrix a = matrix;
  const std::size_t size = a.rows();
  MultiSurd det(1);
  for (std::size_t k = 0; k < size; ++k) {
    std::size_t pivot = k;
    while (pivot < size && a(pivot, k).is_zero()) ++pivot;
    if (pivot == size) return MultiSurd();
    if (pivot != k) {
      for (std::size_t c = 0; c < size; ++c) std::swap(a(k, c), a(pivot, c));
      det = -det;
    }
    det *= a(k, k);
    const MultiSurd inv = a(k, k).Inverse();
    for (std::size_t r = k + 1; r < size; ++r) {
      if (a(r, k).is_zero()) continue;
      const MultiSurd factor = a(r, k) * inv;
      for (std::size_t c = k; c < size; ++c) a(r, c) -= factor * a(k, c);
    }
  }
  return det;
}

QuadraticForm RationalForm(const GramMatrix& gram, int dimension,
                           const std::set<Radicand>& field,
                           const SpanningTree& tree) {
  const int size = static_cast<int>(gram.rows());
  if (static_cast<int>(tree.size()) != size)
    throw Error(ErrorCode::kInvalidArgument, "spanning tree size mismatch");

  QuadraticForm out;
  out.scaling.assign(size, MultiSurd());
  std::vector<bool> done(size, false);
  std::function<const MultiSurd&(int)> lambda = [&](int v) -> const MultiSurd& {
    if (!done[v]) {
      const int p = tree[v];
      if (p == -1) {
        out.scaling[v] = MultiSurd(1);
      } else {
        if (p < 0 || p >= size || gram(p, v).is_zero())
          throw Error(ErrorCode::kInvalidArgument, "invalid spanning tree edge");
        out.scaling[v] = lambda(p) * MultiSurd(2) * gram(p, v);
      }
      done[v] = true;
    }
    return out.scaling[v];
  };
  for (int v = 0; v < size; ++v) lambda(v);

  out.full = SurdMatrix(size, size);
  for (int i = 0; i < size; ++i)
    for (int j = i; j < size; ++j) {
      MultiSurd entry = gram(i, j).is_zero()
                            ? MultiSurd()
                            : out.scaling[i] * out.scaling[j] * gram(i, j);
      if (!InField(entry, field))
        throw Error(ErrorCode::kNotInField,
                    "rescaled entry (" + std::to_string(i) + "," + std::to_string(j) +
                        ") = " + entry.ToString() + " outside the field of definition");
      out.full(j, i) = entry;
      out.full(i, j) = std::move(entry);
    }

  const int rank = dimension + 1;
  std::vector<int> subset(rank);
  for (int k = 0; k < rank; ++k) subset[k] = k;
  for (;;) {
    SurdMatrix block = out.full.Principal(subset);
    if (!Determinant(block).is_zero()) {
      out.matrix = std::move(block);
      out.basis_facets = subset;
      return out;
    }
    int k = rank - 1;
    while (k >= 0 && subset[k] == size - rank + k) --k;
    if (k < 0) break;
    ++subset[k];
    for (int t = k + 1; t < rank; ++t) subset[t] = subset[t - 1] + 1;
  }
  throw Error(ErrorCode::kRankDeficient,
              "no nonsingular principal " + std::to_string(rank) + "-subblock");
}

QuadraticForm RationalForm(const GramMatrix& gram, int dimension) {
  return RationalForm(gram, dimension, FieldOfDefinition(EnumerateCycles(gram)),
                      BreadthFirstTree(gram));
}

Integer DiscriminantClass(const QuadraticForm& form) {
  for (std::size_t i = 0; i < form.matrix.rows(); ++i)
    for (std::size_t j = 0; j < form.matrix.cols(); ++j)
      if (!form.matrix(i, j).is_rational())
        throw Error(ErrorCode::kFieldNotQ, "quadratic form is not defined over Q");
  return SquarefreePart(Determinant(form.matrix).rational_value());
}

Integer DiscriminantDelta(const QuadraticForm& form, int dimension) {
  if (dimension % 2 == 0)
    throw Error(ErrorCode::kInvalidArgument, "delta needs odd dimension");
  const int m = (dimension + 1) / 2;
  const Integer disc = DiscriminantClass(form);
  return m % 2 == 0 ? disc : Integer(-disc);
}

std::string_view ArithmeticityName(Arithmeticity a) {
  switch (a) {
    case Arithmeticity::kArithmetic: return "Arithmetic";
    case Arithmeticity::kProperlyQuasiArithmetic: return "ProperlyQuasiArithmetic";
    case Arithmeticity::kNotQuasiArithmetic: return "NotQuasiArithmetic";
  }
  return "?";
}

ArithmeticityReport Classify(const GramMatrix& gram, int dimension) {
  const int size = static_cast<int>(gram.rows());
  const Inertia inertia = Signature(gram);
  if (!IsLorentzian(inertia, dimension, size))
    throw Error(ErrorCode::kNotLorentzian,
                "Gram signature (" + std::to_string(inertia.positive) + "," +
                    std::to_string(inertia.negative) + "," + std::to_string(inertia.zero) +
                    "), expected (" + std::to_string(dimension) + ",1," +
                    std::to_string(size - dimension - 1) + ")");

  ArithmeticityReport report;
  const auto cycles = EnumerateCycles(gram);
  report.cycle_count = cycles.size();
  report.field_generators = FieldOfDefinition(cycles);
  report.form = RationalForm(gram, dimension, report.field_generators,
                             BreadthFirstTree(gram));

  // Nontrivial embeddings of K, one representative sign pattern per distinct
  // action on the generators.
  std::set<std::uint64_t> prime_set;
  for (Radicand g : report.field_generators)
    for (const auto& [p, e] : Factorize(g)) prime_set.insert(p);
  const std::vector<std::uint64_t> primes(prime_set.begin(), prime_set.end());
  const std::vector<Radicand> generators(report.field_generators.begin(),
                                         report.field_generators.end());
  std::set<std::vector<bool>> actions;
  bool definite_conjugates = true;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << primes.size()); ++mask) {
    std::set<std::uint64_t> flips;
    for (std::size_t k = 0; k < primes.size(); ++k)
      if (mask >> k & 1) flips.insert(primes[k]);
    std::vector<bool> action;
    for (Radicand g : generators)
      action.push_back(GaloisConjugate(MultiSurd::Sqrt(g), flips) != MultiSurd::Sqrt(g));
    if (std::none_of(action.begin(), action.end(), [](bool b) { return b; })) continue;
    if (!actions.insert(action).second) continue;

    SurdMatrix conj = report.form.matrix;
    for (std::size_t i = 0; i < conj.rows(); ++i)
      for (std::size_t j = 0; j < conj.cols(); ++j) conj(i, j) = GaloisConjugate(conj(i, j), flips);
    const Inertia ci = Signature(conj);
    const int full = static_cast<int>(conj.rows());
    if (ci.positive != full && ci.negative != full) {
      definite_conjugates = false;
      report.witnesses.push_back(
          {ArithmeticityWitness::Kind::kIndefiniteConjugate, {}, {}, flips, ci});
    }
  }

  bool integral = true;
  for (const CyclicProduct& c : cycles) {
    if (!IsAlgebraicInteger(c.value)) {
      integral = false;
      report.witnesses.push_back(
          {ArithmeticityWitness::Kind::kNonIntegralCycle, c.cycle, c.value, {}, {}});
    }
  }

  if (!definite_conjugates) {
    report.classification = Arithmeticity::kNotQuasiArithmetic;
  } else if (integral) {
    report.classification = Arithmeticity::kArithmetic;
  } else {
    report.classification = Arithmeticity::kProperlyQuasiArithmetic;
  }

  if (report.field_generators.empty()) {
    report.disc_class = DiscriminantClass(report.form);
    if (dimension % 2 == 1) report.delta = DiscriminantDelta(report.form, dimension);
  }
  return report;
}

}  // namespace hypvol
