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

#include "hypvol/real.hpp"
#include "hypvol/surd.hpp"

namespace hypvol {

struct FundamentalDiscriminant {
  std::int64_t value = 0;   // D
  std::int64_t radicand = 0;  // squarefree delta with Q(sqrt(delta)) = Q(sqrt(D))
};

// D = delta if delta = 1 mod 4, else 4 delta. Throws kDeltaIsSquare for
// delta = 1 and kInvalidArgument for zero or non-squarefree input.
FundamentalDiscriminant MakeFundamentalDiscriminant(std::int64_t delta);

// Kronecker symbol (D / n), n >= 1.
int KroneckerSymbol(std::int64_t d, std::uint64_t n);
inline int KroneckerChi(const FundamentalDiscriminant& d, std::uint64_t n) {
  return KroneckerSymbol(d.value, n);
}

struct PrecisionContext {
  unsigned bits = 128;
  double target_error = 1e-30;  // absolute
};

// Euler-Maclaurin evaluation with the remainder bounded by the first omitted
// correction term (valid since all even derivatives of (x+a)^-s are positive).
// The returned error covers truncation plus a rounding allowance.
Enclosed HurwitzZeta(int s, const Rational& a, const PrecisionContext& ctx = {});
Enclosed RiemannZeta(int s, const PrecisionContext& ctx = {});

// L(s, chi_D) = |D|^-s sum_{a=1}^{|D|} chi_D(a) zeta(s, a/|D|).
Enclosed DirichletL(int s, const FundamentalDiscriminant& d, const PrecisionContext& ctx = {});

}  // namespace hypvol
