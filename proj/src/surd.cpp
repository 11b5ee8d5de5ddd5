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

#include "hypvol/surd.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <numeric>
#include <sstream>

#include "hypvol/error.hpp"

namespace hypvol {

std::vector<std::pair<std::uint64_t, int>> Factorize(std::uint64_t value) {
  std::vector<std::pair<std::uint64_t, int>> out;
  for (std::uint64_t p = 2; p * p <= value; p += (p == 2 ? 1 : 2)) {
    int e = 0;
    while (value % p == 0) {
      value /= p;
      ++e;
    }
    if (e > 0) out.emplace_back(p, e);
  }
  if (value > 1) out.emplace_back(value, 1);
  return out;
}

std::vector<std::pair<Integer, int>> Factorize(const Integer& value) {
  std::vector<std::pair<Integer, int>> out;
  Integer rest = abs(value);
  if (rest == 0) return out;
  for (Integer p = 2; p * p <= rest; p += (p == 2 ? 1 : 2)) {
    int e = 0;
    while (mpz_divisible_p(rest.get_mpz_t(), p.get_mpz_t())) {
      rest /= p;
      ++e;
    }
    if (e > 0) out.emplace_back(p, e);
  }
  if (rest > 1) out.emplace_back(rest, 1);
  return out;
}

bool IsSquarefree(std::uint64_t value) {
  if (value == 0) return false;
  for (const auto& [p, e] : Factorize(value))
    if (e > 1) return false;
  return true;
}

Integer SquarefreePart(const Rational& value) {
  if (value == 0) throw Error(ErrorCode::kInvalidArgument, "square class of 0");
  Integer product = value.get_num() * value.get_den();
  Integer out = 1;
  for (const auto& [p, e] : Factorize(product))
    if (e % 2 == 1) out *= p;
  return product < 0 ? Integer(-out) : out;
}

namespace {

Radicand MulChecked(Radicand a, Radicand b) {
  Radicand out;
  if (__builtin_mul_overflow(a, b, &out))
    throw Error(ErrorCode::kInvalidArgument, "radicand overflow");
  return out;
}

void SetRational(Real& dst, const Rational& q, mpfr_rnd_t rnd) {
  mpfr_set_q(dst.backend().data(), q.get_mpq_t(), rnd);
}

}  // namespace

MultiSurd::MultiSurd(const Rational& value) { AddTerm(1, value); }

MultiSurd MultiSurd::Monomial(const Rational& coeff, std::uint64_t d) {
  if (d == 0) throw Error(ErrorCode::kInvalidArgument, "sqrt(0) radicand");
  std::uint64_t square = 1;
  std::uint64_t core = 1;
  for (const auto& [p, e] : Factorize(d)) {
    for (int k = 0; k < e / 2; ++k) square *= p;
    if (e % 2 == 1) core *= p;
  }
  MultiSurd out;
  out.AddTerm(core, coeff * Rational(Integer(std::to_string(square))));
  return out;
}

void MultiSurd::AddTerm(Radicand d, const Rational& c) {
  if (c == 0) return;
  Rational canonical = c;
  canonical.canonicalize();
  auto [it, inserted] = terms_.try_emplace(d, std::move(canonical));
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

Rational MultiSurd::rational_value() const {
  if (!is_rational())
    throw Error(ErrorCode::kInvalidArgument, "not rational: " + ToString());
  return terms_.empty() ? Rational(0) : terms_.begin()->second;
}

Rational MultiSurd::coeff(Radicand d) const {
  auto it = terms_.find(d);
  return it == terms_.end() ? Rational(0) : it->second;
}

std::set<Radicand> MultiSurd::radicands() const {
  std::set<Radicand> out;
  for (const auto& [d, c] : terms_)
    if (d != 1) out.insert(d);
  return out;
}

std::set<std::uint64_t> MultiSurd::primes() const {
  std::set<std::uint64_t> out;
  for (const auto& [d, c] : terms_)
    for (const auto& [p, e] : Factorize(d)) out.insert(p);
  return out;
}

MultiSurd MultiSurd::operator-() const {
  MultiSurd out = *this;
  for (auto& [d, c] : out.terms_) c = -c;
  return out;
}

MultiSurd& MultiSurd::operator+=(const MultiSurd& other) {
  for (const auto& [d, c] : other.terms_) AddTerm(d, c);
  return *this;
}

MultiSurd& MultiSurd::operator-=(const MultiSurd& other) {
  for (const auto& [d, c] : other.terms_) AddTerm(d, -c);
  return *this;
}

MultiSurd operator*(const MultiSurd& a, const MultiSurd& b) {
  MultiSurd out;
  for (const auto& [da, ca] : a.terms_) {
    for (const auto& [db, cb] : b.terms_) {
      const Radicand g = std::gcd(da, db);
      const Radicand core = MulChecked(da / g, db / g);
      out.AddTerm(core, ca * cb * Rational(Integer(std::to_string(g))));
    }
  }
  return out;
}

MultiSurd& MultiSurd::operator*=(const MultiSurd& other) {
  *this = *this * other;
  return *this;
}

MultiSurd& MultiSurd::operator/=(const MultiSurd& other) {
  *this = *this * other.Inverse();
  return *this;
}

MultiSurd MultiSurd::Inverse() const {
  if (is_zero()) throw Error(ErrorCode::kInvalidArgument, "inverse of zero");
  // Multiplying by the sqrt(p)-conjugate kills every radicand divisible by p
  // and never reintroduces primes already eliminated.
  MultiSurd reduced = *this;
  MultiSurd numerator(1);
  for (std::uint64_t p : primes()) {
    MultiSurd conj = GaloisConjugate(reduced, {p});
    numerator *= conj;
    reduced *= conj;
  }
  const Rational norm = reduced.rational_value();
  return numerator * MultiSurd(Rational(1) / norm);
}

double MultiSurd::ToDouble() const {
  double out = 0.0;
  for (const auto& [d, c] : terms_)
    out += c.get_d() * std::sqrt(static_cast<double>(d));
  return out;
}

Real MultiSurd::ToReal() const {
  Real out = 0;
  for (const auto& [d, c] : terms_) {
    Real coeff;
    SetRational(coeff, c, MPFR_RNDN);
    out += d == 1 ? coeff : coeff * sqrt(Real(d));
  }
  return out;
}

std::string MultiSurd::ToString() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [d, c] : terms_) {
    Rational mag = abs(c);
    if (first) {
      if (c < 0) os << "-";
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    first = false;
    if (d == 1) {
      os << mag.get_str();
    } else if (mag == 1) {
      os << "sqrt(" << d << ")";
    } else if (mag.get_num() == 1) {
      os << "sqrt(" << d << ")/" << mag.get_den().get_str();
    } else {
      os << mag.get_str() << "*sqrt(" << d << ")";
    }
  }
  return os.str();
}

Interval Enclose(const MultiSurd& x, unsigned bits) {
  ScopedPrecision precision(bits);
  Interval out{Real(0), Real(0)};
  Real clo, chi, slo, shi, plo, phi;
  for (const auto& [d, c] : x.terms()) {
    SetRational(clo, c, MPFR_RNDD);
    SetRational(chi, c, MPFR_RNDU);
    mpfr_set_ui(slo.backend().data(), d, MPFR_RNDD);
    mpfr_set_ui(shi.backend().data(), d, MPFR_RNDU);
    mpfr_sqrt(slo.backend().data(), slo.backend().data(), MPFR_RNDD);
    mpfr_sqrt(shi.backend().data(), shi.backend().data(), MPFR_RNDU);
    if (c >= 0) {
      mpfr_mul(plo.backend().data(), clo.backend().data(), slo.backend().data(), MPFR_RNDD);
      mpfr_mul(phi.backend().data(), chi.backend().data(), shi.backend().data(), MPFR_RNDU);
    } else {
      mpfr_mul(plo.backend().data(), clo.backend().data(), shi.backend().data(), MPFR_RNDD);
      mpfr_mul(phi.backend().data(), chi.backend().data(), slo.backend().data(), MPFR_RNDU);
    }
    mpfr_add(out.lo.backend().data(), out.lo.backend().data(), plo.backend().data(), MPFR_RNDD);
    mpfr_add(out.hi.backend().data(), out.hi.backend().data(), phi.backend().data(), MPFR_RNDU);
  }
  return out;
}

int Sign(const MultiSurd& x, const SignOptions& options) {
  if (x.is_zero()) return 0;
  if (x.is_rational()) return sgn(x.rational_value());
  for (unsigned bits = options.start_bits; bits <= options.max_bits; bits *= 2) {
    const Interval box = Enclose(x, bits);
    if (box.lo > 0) return 1;
    if (box.hi < 0) return -1;
  }
  throw Error(ErrorCode::kPrecisionExhausted,
              "sign undecided at " + std::to_string(options.max_bits) +
                  " bits for " + x.ToString());
}

MultiSurd GaloisConjugate(const MultiSurd& x,
                          const std::set<std::uint64_t>& flip_primes) {
  MultiSurd out;
  for (const auto& [d, c] : x.terms()) {
    int flips = 0;
    for (std::uint64_t p : flip_primes)
      if (d % p == 0) ++flips;
    out += MultiSurd::Monomial(flips % 2 == 0 ? c : Rational(-c), d);
  }
  return out;
}

bool IsAlgebraicInteger(const MultiSurd& x) {
  if (x.is_rational()) return x.rational_value().get_den() == 1;
  const std::set<std::uint64_t> prime_set = x.primes();
  const std::vector<std::uint64_t> primes(prime_set.begin(), prime_set.end());
  // Coefficients of prod over all sign patterns of (t - sigma(x)), low degree
  // first.
  std::vector<MultiSurd> poly{MultiSurd(1)};
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << primes.size()); ++mask) {
    std::set<std::uint64_t> flips;
    for (std::size_t k = 0; k < primes.size(); ++k)
      if (mask >> k & 1) flips.insert(primes[k]);
    const MultiSurd root = GaloisConjugate(x, flips);
    std::vector<MultiSurd> next(poly.size() + 1);
    for (std::size_t k = 0; k < poly.size(); ++k) {
      next[k + 1] += poly[k];
      next[k] -= poly[k] * root;
    }
    poly = std::move(next);
  }
  for (const MultiSurd& c : poly)
    if (c.rational_value().get_den() != 1) return false;
  return true;
}

bool InField(const MultiSurd& x, const std::set<Radicand>& generators) {
  // Square classes of squarefree integers form an F2 vector space with the
  // primes as basis; membership is a rank test.
  std::vector<std::uint64_t> primes;
  auto index_of = [&primes](std::uint64_t p) {
    for (std::size_t k = 0; k < primes.size(); ++k)
      if (primes[k] == p) return k;
    primes.push_back(p);
    if (primes.size() > 64)
      throw Error(ErrorCode::kInvalidArgument, "too many primes in field test");
    return primes.size() - 1;
  };
  auto to_mask = [&](Radicand d) {
    std::uint64_t mask = 0;
    for (const auto& [p, e] : Factorize(d))
      if (e % 2 == 1) mask |= std::uint64_t{1} << index_of(p);
    return mask;
  };
  std::vector<std::uint64_t> basis;  // reduced echelon rows keyed by top bit
  auto reduce = [&basis](std::uint64_t v) {
    for (std::uint64_t b : basis)
      if (v & (std::uint64_t{1} << (63 - __builtin_clzll(b)))) v ^= b;
    return v;
  };
  for (Radicand g : generators) {
    const std::uint64_t r = reduce(to_mask(g));
    if (r != 0) {
      basis.push_back(r);
      std::sort(basis.begin(), basis.end(), std::greater<>());
    }
  }
  for (Radicand d : x.radicands())
    if (reduce(to_mask(d)) != 0) return false;
  return true;
}

namespace {

class SurdParser {
 public:
  explicit SurdParser(std::string_view text) : text_(text) {}

  MultiSurd Parse() {
    MultiSurd out = Expression();
    SkipSpace();
    if (pos_ != text_.size()) Fail("trailing input");
    return out;
  }

 private:
  MultiSurd Expression() {
    MultiSurd out = Term();
    for (;;) {
      SkipSpace();
      if (Accept('+')) {
        out += Term();
      } else if (Accept('-')) {
        out -= Term();
      } else {
        return out;
      }
    }
  }

  MultiSurd Term() {
    MultiSurd out = Factor();
    for (;;) {
      SkipSpace();
      if (Accept('*')) {
        out *= Factor();
      } else if (Accept('/')) {
        MultiSurd divisor = Factor();
        if (divisor.is_zero()) Fail("division by zero");
        out /= divisor;
      } else {
        return out;
      }
    }
  }

  MultiSurd Factor() {
    SkipSpace();
    if (Accept('-')) return -Factor();
    if (Accept('+')) return Factor();
    if (Accept('(')) {
      MultiSurd inner = Expression();
      SkipSpace();
      if (!Accept(')')) Fail("expected ')'");
      return inner;
    }
    if (text_.substr(pos_, 4) == "sqrt") {
      pos_ += 4;
      SkipSpace();
      if (!Accept('(')) Fail("expected '(' after sqrt");
      SkipSpace();
      const Integer d = Digits();
      SkipSpace();
      if (!Accept(')')) Fail("expected ')' after sqrt argument");
      if (d <= 0 || !d.fits_ulong_p()) Fail("sqrt argument must be a positive integer");
      return MultiSurd::Sqrt(d.get_ui());
    }
    return MultiSurd(Rational(Digits()));
  }

  Integer Digits() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
    if (pos_ == start) Fail("expected a number");
    return Integer(std::string(text_.substr(start, pos_ - start)));
  }

  bool Accept(char c) {
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void SkipSpace() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_])))
      ++pos_;
  }

  [[noreturn]] void Fail(const std::string& what) const {
    throw Error(ErrorCode::kSyntaxError,
                what + " at offset " + std::to_string(pos_) + " in '" +
                    std::string(text_) + "'");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

MultiSurd ParseSurd(std::string_view text) { return SurdParser(text).Parse(); }

}  // namespace hypvol
