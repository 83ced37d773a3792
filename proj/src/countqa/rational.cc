// Copyright 2026 The CountQA Authors.
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

#include "countqa/rational.h"

#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace countqa {

namespace {

using i128 = __int128;

constexpr std::int64_t kMax = std::numeric_limits<std::int64_t>::max();
constexpr int kMaxFractionDigits = 9;

std::optional<Count> MakeReduced(i128 num, i128 den) {
  if (den == 0 || num < 0 || den < 0) return std::nullopt;
  i128 a = num, b = den;
  while (b != 0) {
    i128 t = a % b;
    a = b;
    b = t;
  }
  if (a > 1) {
    num /= a;
    den /= a;
  }
  if (num > kMax || den > kMax) return std::nullopt;
  return Count(static_cast<std::int64_t>(num), static_cast<std::int64_t>(den));
}

}  // namespace

Count::Count(std::int64_t num, std::int64_t den) {
  if (den == 0) throw std::invalid_argument("count with zero denominator");
  if (num < 0 || den < 0) throw std::invalid_argument("count must be nonnegative");
  std::int64_t g = std::gcd(num, den);
  if (g == 0) g = 1;
  num_ = num / g;
  den_ = den / g;
}

std::optional<Count> Count::FromDecimal(std::string_view digits) {
  std::string whole, frac;
  bool seen_point = false;
  for (char c : digits) {
    if (c == ',' && !seen_point) continue;
    if (c == '.') {
      if (seen_point) return std::nullopt;
      seen_point = true;
      continue;
    }
    if (c < '0' || c > '9') return std::nullopt;
    (seen_point ? frac : whole).push_back(c);
  }
  if (whole.empty() && frac.empty()) return std::nullopt;
  std::size_t nz = whole.find_first_not_of('0');
  whole = nz == std::string::npos ? "" : whole.substr(nz);
  if (whole.size() > 18) return std::nullopt;
  // Digits beyond the ninth decimal place are truncated.
  if (frac.size() > kMaxFractionDigits) frac.resize(kMaxFractionDigits);
  i128 num = 0;
  i128 den = 1;
  for (char c : whole) num = num * 10 + (c - '0');
  for (char c : frac) {
    num = num * 10 + (c - '0');
    den *= 10;
  }
  return MakeReduced(num, den);
}

std::optional<Count> Count::FromDouble(double value) {
  if (!std::isfinite(value) || value < 0) return std::nullopt;
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9f", value);
  return FromDecimal(buf);
}

std::optional<Count> Count::Times(const Count &other) const {
  return MakeReduced(static_cast<i128>(num_) * other.num_, static_cast<i128>(den_) * other.den_);
}

std::optional<Count> Count::Plus(const Count &other) const {
  return MakeReduced(static_cast<i128>(num_) * other.den_ + static_cast<i128>(other.num_) * den_,
                     static_cast<i128>(den_) * other.den_);
}

Count Count::AbsDiff(const Count &a, const Count &b) {
  i128 x = static_cast<i128>(a.num_) * b.den_;
  i128 y = static_cast<i128>(b.num_) * a.den_;
  auto r = MakeReduced(x > y ? x - y : y - x, static_cast<i128>(a.den_) * b.den_);
  if (!r) throw std::overflow_error("count difference overflow");
  return *r;
}

std::optional<Count> Count::Midpoint(const Count &lo, const Count &hi) {
  return MakeReduced(static_cast<i128>(lo.num_) * hi.den_ + static_cast<i128>(hi.num_) * lo.den_,
                     static_cast<i128>(lo.den_) * hi.den_ * 2);
}

std::string Count::ToString() const {
  if (den_ == 1) return std::to_string(num_);
  // Terminating decimals only have 2 and 5 in the denominator.
  std::int64_t d = den_;
  int twos = 0, fives = 0;
  while (d % 2 == 0) d /= 2, ++twos;
  while (d % 5 == 0) d /= 5, ++fives;
  if (d != 1) return std::to_string(num_) + "/" + std::to_string(den_);
  int places = std::max(twos, fives);
  i128 scaled = static_cast<i128>(num_);
  for (int i = 0; i < places; ++i) scaled *= 10;
  scaled /= den_;
  i128 p = 1;
  for (int i = 0; i < places; ++i) p *= 10;
  std::string whole = std::to_string(static_cast<std::int64_t>(scaled / p));
  std::string frac = std::to_string(static_cast<std::int64_t>(scaled % p));
  frac.insert(0, places - frac.size(), '0');
  while (!frac.empty() && frac.back() == '0') frac.pop_back();
  return frac.empty() ? whole : whole + "." + frac;
}

std::strong_ordering operator<=>(const Count &a, const Count &b) {
  i128 x = static_cast<i128>(a.num_) * b.den_;
  i128 y = static_cast<i128>(b.num_) * a.den_;
  if (x < y) return std::strong_ordering::less;
  if (x > y) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

bool WithinRelative(const Count &value, const Count &anchor, std::int64_t ppm) {
  // |vn/vd - an/ad| * 1e6 <= ppm * an/ad  <=>  |vn*ad - an*vd| * 1e6 <= ppm * an * vd
  i128 x = static_cast<i128>(value.num()) * anchor.den();
  i128 y = static_cast<i128>(anchor.num()) * value.den();
  i128 diff = x > y ? x - y : y - x;
  return diff * 1000000 <= static_cast<i128>(ppm) * anchor.num() * value.den();
}

}  // namespace countqa
