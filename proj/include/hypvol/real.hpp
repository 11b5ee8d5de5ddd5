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

#include <cmath>
#include <string>

#include <boost/multiprecision/mpfr.hpp>

namespace hypvol {

// Variable-precision MPFR float. New values pick up the process-wide default
// precision, which ScopedPrecision adjusts.
using Real = boost::multiprecision::number<
    boost::multiprecision::mpfr_float_backend<0>,
    boost::multiprecision::et_off>;

inline unsigned BitsToDigits10(unsigned bits) {
  return static_cast<unsigned>(std::ceil(bits * 0.30102999566398120)) + 1;
}

// Sets the default Real precision for the lifetime of the guard. Not
// thread-safe: Real-valued stages run on the calling thread only.
class ScopedPrecision {
 public:
  explicit ScopedPrecision(unsigned bits)
      : saved_(Real::default_precision()) {
    Real::default_precision(BitsToDigits10(bits));
  }
  ~ScopedPrecision() { Real::default_precision(saved_); }

  ScopedPrecision(const ScopedPrecision&) = delete;
  ScopedPrecision& operator=(const ScopedPrecision&) = delete;

 private:
  unsigned saved_;
};

// Real value with an absolute error bound.
struct Enclosed {
  Real value;
  Real error;
};

inline std::string ToString(const Real& x, int digits = 30) {
  return x.str(digits, std::ios_base::scientific);
}

}  // namespace hypvol
