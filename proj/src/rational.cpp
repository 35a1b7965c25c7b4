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

#include "lbft/rational.hpp"

#include <charconv>

namespace lbft {

namespace {

std::int64_t checked(__int128 v)
{
   if (v > INT64_MAX || v < INT64_MIN)
      throw std::overflow_error("rational overflow");
   return static_cast<std::int64_t>(v);
}

Rational make(__int128 num, __int128 den)
{
   if (den == 0)
      throw std::domain_error("zero denominator");
   if (den < 0) {
      num = -num;
      den = -den;
   }
   __int128 a = num < 0 ? -num : num;
   __int128 b = den;
   while (b != 0) {
      const __int128 t = a % b;
      a = b;
      b = t;
   }
   if (a > 1) {
      num /= a;
      den /= a;
   }
   return Rational{checked(num), checked(den)};
}

}  // namespace

Rational::Rational(std::int64_t num, std::int64_t den)
{
   if (den == 0)
      throw std::domain_error("zero denominator");
   if (den < 0) {
      num = -num;
      den = -den;
   }
   const std::int64_t g = std::gcd(num, den);
   num_ = g > 1 ? num / g : num;
   den_ = g > 1 ? den / g : den;
}

Rational Rational::parse(std::string_view text)
{
   auto parse_int = [&](std::string_view s) {
      std::int64_t v = 0;
      auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (ec != std::errc{} || ptr != s.data() + s.size())
         throw std::invalid_argument("bad rational: " + std::string(text));
      return v;
   };
   const auto slash = text.find('/');
   if (slash == std::string_view::npos)
      return Rational{parse_int(text)};
   return Rational{parse_int(text.substr(0, slash)), parse_int(text.substr(slash + 1))};
}

std::string Rational::str() const
{
   if (den_ == 1)
      return std::to_string(num_);
   return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational operator+(const Rational& a, const Rational& b)
{
   return make(static_cast<__int128>(a.num_) * b.den_ + static_cast<__int128>(b.num_) * a.den_,
               static_cast<__int128>(a.den_) * b.den_);
}

Rational operator-(const Rational& a, const Rational& b)
{
   return make(static_cast<__int128>(a.num_) * b.den_ - static_cast<__int128>(b.num_) * a.den_,
               static_cast<__int128>(a.den_) * b.den_);
}

Rational operator*(const Rational& a, const Rational& b)
{
   return make(static_cast<__int128>(a.num_) * b.num_, static_cast<__int128>(a.den_) * b.den_);
}

}  // namespace lbft
