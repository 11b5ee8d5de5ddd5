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
#include "hypvol/surd.hpp"

using namespace hypvol;

namespace {

MultiSurd RandomSurd(std::mt19937_64& rng, int max_terms = 4) {
  static constexpr std::uint64_t kRadicands[] = {1, 2, 3, 5, 6, 10, 13, 26};
  std::uniform_int_distribution<int> count(0, max_terms);
  std::uniform_int_distribution<int> pick(0, 7);
  std::uniform_int_distribution<long> num(-9, 9);
  std::uniform_int_distribution<long> den(1, 6);
  MultiSurd out;
  for (int k = count(rng); k > 0; --k)
    out += MultiSurd::Monomial(Rational(num(rng), den(rng)), kRadicands[pick(rng)]);
  return out;
}

}  // namespace

TEST_CASE("multiplication reduces radicands by their gcd") {
  CHECK(MultiSurd::Sqrt(2) * MultiSurd::Sqrt(26) == MultiSurd::Monomial(2, 13));
  const MultiSurd label = ParseSurd("sqrt(26)/4");
  CHECK(label * label == MultiSurd(Rational(13, 8)));
  CHECK(MultiSurd::Sqrt(12) == MultiSurd::Monomial(2, 3));
}

TEST_CASE("golden ratio square expands to 3/8 + sqrt(5)/8") {
  const MultiSurd x = (MultiSurd(1) + MultiSurd::Sqrt(5)) / MultiSurd(4);
  const MultiSurd sq = x * x;
  CHECK(sq == MultiSurd(Rational(3, 8)) + MultiSurd::Monomial(Rational(1, 8), 5));
  const double f = (1.0 + std::sqrt(5.0)) / 4.0;
  CHECK(sq.ToDouble() == doctest::Approx(f * f).epsilon(1e-15));
}

TEST_CASE("exact sign") {
  CHECK(Sign(MultiSurd()) == 0);
  CHECK(Sign(ParseSurd("sqrt(26)/4 - 1")) == 1);
  CHECK(Sign(ParseSurd("3 - 2*sqrt(2)")) == 1);
  CHECK(Sign(ParseSurd("2*sqrt(2) - 3")) == -1);
  CHECK(Sign(ParseSurd("-1/2")) == -1);
}

TEST_CASE("sign separates values closer than double precision") {
  // (sqrt(2) - 1)^40 ~ 5e-16 is tiny but positive; its expansion has huge
  // cancelling coefficients.
  MultiSurd base = MultiSurd::Sqrt(2) - MultiSurd(1);
  MultiSurd p(1);
  for (int k = 0; k < 40; ++k) p *= base;
  CHECK(Sign(p) == 1);
  CHECK(Sign(-p) == -1);
}

TEST_CASE("sign gives up at the precision cap") {
  MultiSurd base = MultiSurd::Sqrt(2) - MultiSurd(1);
  MultiSurd p(1);
  for (int k = 0; k < 200; ++k) p *= base;  // ~1e-77, needs > 256 bits
  bool threw = false;
  try {
    Sign(p, SignOptions{64, 128});
  } catch (const Error& e) {
    threw = e.code() == ErrorCode::kPrecisionExhausted;
  }
  CHECK(threw);
  CHECK(Sign(p) == 1);
}

TEST_CASE("galois conjugation") {
  const MultiSurd x = ParseSurd("1 + sqrt(5)");
  CHECK(GaloisConjugate(x, {5}) == ParseSurd("1 - sqrt(5)"));
  CHECK(GaloisConjugate(MultiSurd(Rational(7, 3)), {2, 3, 5}) == MultiSurd(Rational(7, 3)));
  // sqrt(6) is fixed when both sqrt(2) and sqrt(3) flip.
  CHECK(GaloisConjugate(MultiSurd::Sqrt(6), {2, 3}) == MultiSurd::Sqrt(6));
  CHECK(GaloisConjugate(MultiSurd::Sqrt(6), {2}) == -MultiSurd::Sqrt(6));
}

TEST_CASE("inverse") {
  const MultiSurd x = ParseSurd("1 + sqrt(2) + sqrt(3) - 2/3*sqrt(6)");
  CHECK(x * x.Inverse() == MultiSurd(1));
  CHECK_THROWS_AS(MultiSurd().Inverse(), Error);
}

TEST_CASE("algebraic integers") {
  CHECK(IsAlgebraicInteger(ParseSurd("(1 + sqrt(5))/2")));
  CHECK(IsAlgebraicInteger(ParseSurd("(3 + sqrt(5))/2")));
  CHECK(IsAlgebraicInteger(MultiSurd::Sqrt(2)));
  CHECK_FALSE(IsAlgebraicInteger(MultiSurd(Rational(13, 2))));
  CHECK_FALSE(IsAlgebraicInteger(ParseSurd("(1 + sqrt(2))/2")));
  CHECK(IsAlgebraicInteger(ParseSurd("(sqrt(2) + sqrt(6))/2")));  // 2cos(pi/12)
}

TEST_CASE("field membership") {
  CHECK(InField(MultiSurd::Sqrt(26), {26}));
  CHECK_FALSE(InField(MultiSurd::Sqrt(2), {26}));
  CHECK(InField(ParseSurd("1 + sqrt(6)"), {2, 3}));
  CHECK(InField(MultiSurd(Rational(5, 7)), {}));
}

TEST_CASE("surd literal parsing") {
  CHECK(ParseSurd("3/4") == MultiSurd(Rational(3, 4)));
  CHECK(ParseSurd("3/4*sqrt(5)") == MultiSurd::Monomial(Rational(3, 4), 5));
  CHECK(ParseSurd(" sqrt( 26 ) / 4 ") == MultiSurd::Monomial(Rational(1, 4), 26));
  CHECK(ParseSurd("1/2 + sqrt(2) - sqrt(8)") == ParseSurd("1/2 - sqrt(2)"));
  CHECK_THROWS_AS(ParseSurd("sqrt(-2)"), Error);
  CHECK_THROWS_AS(ParseSurd("1/0"), Error);
  CHECK_THROWS_AS(ParseSurd("abc"), Error);
  const MultiSurd x = ParseSurd("-2/3*sqrt(10) + 1/5 + sqrt(7)/9");
  CHECK(ParseSurd(x.ToString()) == x);
}

TEST_CASE("ring axioms on random triples") {
  std::mt19937_64 rng(12345);
  for (int trial = 0; trial < 300; ++trial) {
    const MultiSurd a = RandomSurd(rng), b = RandomSurd(rng), c = RandomSurd(rng);
    CHECK((a * b) * c == a * (b * c));
    CHECK(a * (b + c) == a * b + a * c);
    CHECK(a * b == b * a);
    CHECK(a + b == b + a);
    CHECK(a - a == MultiSurd());
  }
}

TEST_CASE("float image lies inside the enclosure at every precision") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const MultiSurd x = RandomSurd(rng);
    for (unsigned bits : {64u, 128u, 256u}) {
      const Interval box = Enclose(x, bits);
      CHECK(box.lo <= box.hi);
      ScopedPrecision precision(bits * 2);
      CHECK(box.contains(x.ToReal()));
    }
  }
}

TEST_CASE("squares of nonzero values are positive") {
  std::mt19937_64 rng(99);
  int tested = 0;
  while (tested < 1000) {
    const MultiSurd x = RandomSurd(rng);
    if (x.is_zero()) continue;
    CHECK(Sign(x * x) == 1);
    ++tested;
  }
}

TEST_CASE("galois conjugation is an involutive ring homomorphism") {
  std::mt19937_64 rng(2024);
  const std::set<std::uint64_t> flip_sets[] = {{2}, {3}, {5}, {2, 13}, {2, 3, 5}};
  for (int trial = 0; trial < 200; ++trial) {
    const MultiSurd a = RandomSurd(rng), b = RandomSurd(rng);
    for (const auto& flips : flip_sets) {
      CHECK(GaloisConjugate(a * b, flips) == GaloisConjugate(a, flips) * GaloisConjugate(b, flips));
      CHECK(GaloisConjugate(a + b, flips) == GaloisConjugate(a, flips) + GaloisConjugate(b, flips));
      CHECK(GaloisConjugate(GaloisConjugate(a, flips), flips) == a);
    }
  }
}
