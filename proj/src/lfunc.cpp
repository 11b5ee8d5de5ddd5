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

#include "hypvol/lfunc.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <vector>

#include "hypvol/error.hpp"

namespace hypvol {

FundamentalDiscriminant MakeFundamentalDiscriminant(std::int64_t delta) {
  if (delta == 1)
    throw Error(ErrorCode::kDeltaIsSquare, "delta = 1: the quadratic field is Q itself");
  if (delta == 0 || !IsSquarefree(static_cast<std::uint64_t>(delta < 0 ? -delta : delta)))
    throw Error(ErrorCode::kInvalidArgument,
                "delta must be a nonzero squarefree integer, got " + std::to_string(delta));
  const std::int64_t residue = ((delta % 4) + 4) % 4;
  return {residue == 1 ? delta : 4 * delta, delta};
}

int KroneckerSymbol(std::int64_t d, std::uint64_t n) {
  if (n == 0) throw Error(ErrorCode::kInvalidArgument, "Kronecker symbol needs n >= 1");
  int result = 1;
  int twos = 0;
  while (n % 2 == 0) {
    n /= 2;
    ++twos;
  }
  if (twos > 0) {
    if (d % 2 == 0) return 0;
    const std::int64_t r = ((d % 8) + 8) % 8;
    if (twos % 2 == 1 && (r == 3 || r == 5)) result = -result;
  }
  // Jacobi symbol (d mod n / n) for odd n.
  const std::int64_t nn = static_cast<std::int64_t>(n);
  std::uint64_t a = static_cast<std::uint64_t>(((d % nn) + nn) % nn);
  std::uint64_t m = n;
  while (a != 0) {
    while (a % 2 == 0) {
      a /= 2;
      if (m % 8 == 3 || m % 8 == 5) result = -result;
    }
    std::swap(a, m);
    if (a % 4 == 3 && m % 4 == 3) result = -result;
    a %= m;
  }
  return m == 1 ? result : 0;
}

namespace {

// B_0, B_1, ..., B_limit as exact rationals.
const std::vector<Rational>& Bernoulli(std::size_t limit) {
  static std::mutex mutex;
  static std::vector<Rational> table{Rational(1)};
  std::lock_guard<std::mutex> lock(mutex);
  while (table.size() <= limit) {
    const std::size_t m = table.size();
    // sum_{k=0}^{m} C(m+1, k) B_k = 0.
    Rational sum = 0;
    Integer binom = 1;  // C(m+1, k)
    for (std::size_t k = 0; k < m; ++k) {
      sum += Rational(binom) * table[k];
      binom = binom * Integer(static_cast<unsigned long>(m + 1 - k)) /
              Integer(static_cast<unsigned long>(k + 1));
    }
    Rational b = -sum / Rational(Integer(static_cast<unsigned long>(m + 1)));
    b.canonicalize();
    table.push_back(b);
  }
  return table;
}

Real ToReal(const Rational& q) {
  Real out;
  mpfr_set_q(out.backend().data(), q.get_mpq_t(), MPFR_RNDN);
  return out;
}

unsigned WorkingBits(const PrecisionContext& ctx) {
  const double digits_bits = -std::log2(std::max(ctx.target_error, 1e-300));
  return std::max(ctx.bits, static_cast<unsigned>(std::ceil(digits_bits)) + 32u);
}

}  // namespace

Enclosed HurwitzZeta(int s, const Rational& a, const PrecisionContext& ctx) {
  if (s < 2) throw Error(ErrorCode::kInvalidArgument, "Hurwitz zeta needs integer s >= 2");
  if (a <= 0 || a > 1) throw Error(ErrorCode::kInvalidArgument, "Hurwitz zeta needs a in (0,1]");
  if (!(ctx.target_error > 0))
    throw Error(ErrorCode::kInvalidArgument, "target error must be positive");

  const unsigned bits = WorkingBits(ctx);
  ScopedPrecision precision(bits);
  const Real target(ctx.target_error);
  const Real shift = ToReal(a);

  for (long n_terms = 16;; n_terms *= 2) {
    const Real x = Real(n_terms) + shift;
    Real sum = 0;
    for (long k = 0; k < n_terms; ++k) sum += pow(Real(k) + shift, -s);
    sum += pow(x, 1 - s) / Real(s - 1) + pow(x, -s) / 2;

    // T_j = B_2j / (2j)! * (s)_{2j-1} * x^{-s-2j+1}, built incrementally.
    Real rising = Real(s);          // (s)_{2j-1}
    Real factorial = 2;             // (2j)!
    Real power = pow(x, -s - 1);    // x^{-s-2j+1}
    const Real inv_x2 = 1 / (x * x);
    Real previous = -1;
    bool converged = false;
    Real bound;
    for (int j = 1; j < 400; ++j) {
      const Real term =
          ToReal(Bernoulli(2 * j)[2 * j]) / factorial * rising * power;
      const Real magnitude = abs(term);
      if (magnitude < target / 4) {
        bound = magnitude;  // first omitted term
        converged = true;
        break;
      }
      if (previous >= 0 && magnitude > previous) break;  // asymptotic divergence
      previous = magnitude;
      sum += term;
      rising *= Real(s + 2 * j - 1) * Real(s + 2 * j);
      factorial *= Real(2 * j + 1) * Real(2 * j + 2);
      power *= inv_x2;
    }
    if (!converged) continue;
    const Real rounding = abs(sum) * Real(n_terms + 400) * pow(Real(2), -static_cast<int>(bits) + 2);
    return {sum, bound + rounding};
  }
}

Enclosed RiemannZeta(int s, const PrecisionContext& ctx) { return HurwitzZeta(s, Rational(1), ctx); }

Enclosed DirichletL(int s, const FundamentalDiscriminant& d, const PrecisionContext& ctx) {
  if (d.value == 1 || d.value == 0)
    throw Error(ErrorCode::kInvalidArgument, "L(s, chi_1) is zeta(s); branch before calling");
  if (s < 2) throw Error(ErrorCode::kInvalidArgument, "L-values need integer s >= 2");
  const std::uint64_t q = static_cast<std::uint64_t>(d.value < 0 ? -d.value : d.value);

  PrecisionContext inner = ctx;
  // Each Hurwitz term is scaled by q^-s and there are at most q of them.
  inner.target_error = ctx.target_error * std::pow(static_cast<double>(q), s - 1);
  const unsigned bits = WorkingBits(ctx);
  inner.bits = bits;
  ScopedPrecision precision(bits);

  Real sum = 0;
  Real error = 0;
  for (std::uint64_t a = 1; a <= q; ++a) {
    const int chi = KroneckerSymbol(d.value, a);
    if (chi == 0) continue;
    const Enclosed h = HurwitzZeta(
        s, Rational(Integer(static_cast<unsigned long>(a)), Integer(static_cast<unsigned long>(q))), inner);
    sum += chi > 0 ? h.value : Real(-h.value);
    error += h.error;
  }
  const Real scale = pow(Real(q), -s);
  const Real value = sum * scale;
  return {value, error * scale + abs(value) * pow(Real(2), -static_cast<int>(bits) + 4)};
}

}  // namespace hypvol
