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

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

#include "hypvol/real.hpp"

namespace hypvol {

using Rational = mpq_class;
using Integer = mpz_class;
using Radicand = std::uint64_t;

// Prime factorization by trial division (inputs are small: radicands and
// discriminants of the P5 and P7 diagrams).
std::vector<std::pair<std::uint64_t, int>> Factorize(std::uint64_t value);
std::vector<std::pair<Integer, int>> Factorize(const Integer& value);

bool IsSquarefree(std::uint64_t value);

// Signed squarefree representative of the square class of a nonzero rational.
Integer SquarefreePart(const Rational& value);

// Element of the real multi-quadratic ring: a finite sum of c_D * sqrt(D)
// with rational c_D and squarefree D >= 1. Canonical: no zero coefficients
// are ever stored, so equality and zero tests are syntactic.
class MultiSurd {
 public:
  MultiSurd() = default;
  MultiSurd(long value) : MultiSurd(Rational(value)) {}  // NOLINT
  MultiSurd(const Rational& value);                       // NOLINT

  // c * sqrt(d) for any positive integer d; square factors are pulled out.
  static MultiSurd Monomial(const Rational& coeff, std::uint64_t d);
  static MultiSurd Sqrt(std::uint64_t d) { return Monomial(Rational(1), d); }

  const std::map<Radicand, Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_rational() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first == 1);
  }
  // Requires is_rational().
  Rational rational_value() const;
  // Coefficient of sqrt(d); zero if absent.
  Rational coeff(Radicand d) const;
  std::set<Radicand> radicands() const;  // excludes 1
  std::set<std::uint64_t> primes() const;

  MultiSurd operator-() const;
  MultiSurd& operator+=(const MultiSurd& other);
  MultiSurd& operator-=(const MultiSurd& other);
  MultiSurd& operator*=(const MultiSurd& other);
  MultiSurd& operator/=(const MultiSurd& other);

  friend MultiSurd operator+(MultiSurd a, const MultiSurd& b) { return a += b; }
  friend MultiSurd operator-(MultiSurd a, const MultiSurd& b) { return a -= b; }
  friend MultiSurd operator*(const MultiSurd& a, const MultiSurd& b);
  friend MultiSurd operator/(MultiSurd a, const MultiSurd& b) { return a /= b; }
  friend bool operator==(const MultiSurd& a, const MultiSurd& b) {
    return a.terms_ == b.terms_;
  }

  // Multiplicative inverse via iterated conjugate products; throws
  // kInvalidArgument on zero.
  MultiSurd Inverse() const;

  double ToDouble() const;
  Real ToReal() const;
  // Surd-literal syntax accepted by ParseSurd.
  std::string ToString() const;

 private:
  void AddTerm(Radicand d, const Rational& c);

  std::map<Radicand, Rational> terms_;
};

// Closed interval with MPFR endpoints.
struct Interval {
  Real lo;
  Real hi;
  bool contains(const Real& x) const { return lo <= x && x <= hi; }
};

// Outward-rounded enclosure of x at the given working precision.
Interval Enclose(const MultiSurd& x, unsigned bits);

struct SignOptions {
  unsigned start_bits = 128;
  unsigned max_bits = 4096;
};

// Exact sign. Zero is decided symbolically; nonzero values are separated from
// zero by interval evaluation with doubling precision. Throws
// kPrecisionExhausted past max_bits.
int Sign(const MultiSurd& x, const SignOptions& options = {});

// Field automorphism sqrt(p) -> -sqrt(p) for each prime p in flip_primes:
// the coefficient of sqrt(D) changes sign iff an odd number of the flipped
// primes divide D. Primes not dividing any radicand have no effect.
MultiSurd GaloisConjugate(const MultiSurd& x,
                          const std::set<std::uint64_t>& flip_primes);

// True iff x is an algebraic integer: the characteristic polynomial of
// multiplication by x over Q has integer coefficients.
bool IsAlgebraicInteger(const MultiSurd& x);

// True iff every radicand of x lies in the square-class group generated by
// `generators`, i.e. x is an element of Q(sqrt(g) : g in generators).
bool InField(const MultiSurd& x, const std::set<Radicand>& generators);

// Parses `p/q`, `sqrt(D)`, `p/q*sqrt(D)`, `sqrt(D)/q`, parentheses and sums
// or differences thereof. Throws kSyntaxError.
MultiSurd ParseSurd(std::string_view text);

}  // namespace hypvol
