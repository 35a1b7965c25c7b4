// Copyright 2026 The lbft Authors
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

#include <compare>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <string_view>

namespace lbft {

/// Exact non-negative-denominator rational over 64-bit integers.
///
/// Every threshold comparison in the library goes through this type (or the
/// integer-numerator form in ProposerSet), never through floating point.
class Rational {
public:
   constexpr Rational() = default;
   constexpr Rational(std::int64_t num) : num_{num}, den_{1} {}
   Rational(std::int64_t num, std::int64_t den);

   static Rational parse(std::string_view text);

   constexpr std::int64_t num() const { return num_; }
   constexpr std::int64_t den() const { return den_; }

   std::string str() const;
   double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

   friend Rational operator+(const Rational& a, const Rational& b);
   friend Rational operator-(const Rational& a, const Rational& b);
   friend Rational operator*(const Rational& a, const Rational& b);

   Rational& operator+=(const Rational& o) { return *this = *this + o; }
   Rational& operator-=(const Rational& o) { return *this = *this - o; }

   friend bool operator==(const Rational& a, const Rational& b) = default;
   friend std::strong_ordering operator<=>(const Rational& a, const Rational& b)
   {
      const __int128 lhs = static_cast<__int128>(a.num_) * b.den_;
      const __int128 rhs = static_cast<__int128>(b.num_) * a.den_;
      return lhs <=> rhs;
   }

private:
   std::int64_t num_ = 0;
   std::int64_t den_ = 1;
};

/// Relative weight of a proposer; members of an active set sum to exactly 1.
using Weight = Rational;

inline const Rational one_third{1, 3};
inline const Rational two_thirds{2, 3};

}  // namespace lbft
