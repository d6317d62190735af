// Copyright 2026 The lpmind Authors.
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


#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "lpmind/fourier.hpp"
#include "lpmind/random.hpp"
#include "oracles.hpp"

namespace lpmind {
namespace {

std::vector<double> random_function(Rng& rng, unsigned nu) {
  std::vector<double> f(std::size_t{1} << nu);
  for (auto& v : f) v = uniform_unit(rng) * 2.0 - 1.0;
  return f;
}

TEST(CharacterIndex, BitsRoundTrip) {
  const std::vector<int> bits{1, 0, 1};
  const CharacterIndex a = CharacterIndex::from_bits(bits);
  EXPECT_EQ(a.mask(), 5u);
  EXPECT_EQ(a.weight(), 2);
  EXPECT_EQ(a.bits(), bits);
  EXPECT_EQ(a.to_string(), "101");
  EXPECT_TRUE(a.bit(0));
  EXPECT_FALSE(a.bit(1));
}

TEST(CharacterIndex, RejectsOversizedMask) {
  EXPECT_THROW(CharacterIndex(4u, 2), std::invalid_argument);
  const std::vector<int> bad{1, 2};
  EXPECT_THROW(CharacterIndex::from_bits(bad), std::invalid_argument);
}

TEST(CharacterOrder, HeavierFirstThenLexicographic) {
  const auto order = characters_in_order(2);
  ASSERT_EQ(order.size(), 4u);
  EXPECT_EQ(order[0].to_string(), "11");
  EXPECT_EQ(order[1].to_string(), "01");
  EXPECT_EQ(order[2].to_string(), "10");
  EXPECT_EQ(order[3].to_string(), "00");
  for (std::size_t i = 0; i + 1 < order.size(); ++i) EXPECT_TRUE(precedes(order[i], order[i + 1]));
  EXPECT_FALSE(precedes(order[0], order[0]));
}

TEST(CharEval, MatchesDefinition) {
  for (unsigned nu = 1; nu <= 4; ++nu) {
    for (std::uint32_t a = 0; a < (1u << nu); ++a) {
      for (std::uint32_t x = 0; x < (1u << nu); ++x) {
        const int expect = oracle::character(a, x, nu);
        EXPECT_EQ(char_eval(a, x), expect);
        EXPECT_EQ(char_eval(CharacterIndex(a, nu), cube_point(x, nu)), expect);
      }
    }
  }
}

TEST(CharEval, RejectsBadPoints) {
  const std::vector<int> short_point{1};
  const std::vector<int> zero_point{1, 0};
  EXPECT_THROW(char_eval(CharacterIndex(3u, 2), short_point), std::invalid_argument);
  EXPECT_THROW(char_eval(CharacterIndex(3u, 2), zero_point), std::invalid_argument);
}

TEST(Wht, ConstantFunction) {
  const FourierSpectrum s = wht(HypercubeFunction(std::vector<double>(8, 3.0)));
  EXPECT_DOUBLE_EQ(s[0], 3.0);
  for (std::size_t a = 1; a < 8; ++a) EXPECT_DOUBLE_EQ(s[a], 0.0);
}

TEST(Wht, CharacterIsADelta) {
  const unsigned nu = 3;
  for (std::uint32_t a = 0; a < 8; ++a) {
    std::vector<double> f(8);
    for (std::uint32_t x = 0; x < 8; ++x) f[x] = oracle::character(a, x, nu);
    const FourierSpectrum s = wht(HypercubeFunction(f));
    for (std::uint32_t b = 0; b < 8; ++b) EXPECT_NEAR(s[b], a == b ? 1.0 : 0.0, 1e-15);
  }
}

TEST(Wht, MatchesNaiveDefinition) {
  Rng rng(101);
  for (unsigned nu = 0; nu <= 6; ++nu) {
    for (int trial = 0; trial < 20; ++trial) {
      const auto f = random_function(rng, nu);
      const auto expect = oracle::naive_wht(f, nu);
      const FourierSpectrum s = wht(HypercubeFunction(f));
      for (std::size_t a = 0; a < f.size(); ++a) EXPECT_NEAR(s[a], expect[a], 1e-12 * (1.0 + std::abs(expect[a])));
    }
  }
}

TEST(Wht, RoundTrip) {
  Rng rng(7);
  for (unsigned nu = 0; nu <= 10; ++nu) {
    const auto f = random_function(rng, nu);
    const HypercubeFunction back = inverse_wht(wht(HypercubeFunction(f)));
    for (std::size_t x = 0; x < f.size(); ++x) EXPECT_NEAR(back[x], f[x], 1e-12);
  }
}

TEST(Wht, Parseval) {
  Rng rng(8);
  for (unsigned nu = 1; nu <= 8; ++nu) {
    const auto f = random_function(rng, nu);
    const FourierSpectrum s = wht(HypercubeFunction(f));
    double lhs = 0, rhs = 0;
    for (double v : f) lhs += v * v;
    for (double c : s.coeffs()) rhs += c * c;
    EXPECT_NEAR(lhs / static_cast<double>(f.size()), rhs, 1e-12);
  }
}

TEST(Wht, Linearity) {
  Rng rng(9);
  const unsigned nu = 5;
  const auto f = random_function(rng, nu);
  const auto g = random_function(rng, nu);
  std::vector<double> h(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) h[i] = 2.5 * f[i] - g[i];
  const FourierSpectrum sf = wht(HypercubeFunction(f)), sg = wht(HypercubeFunction(g)), sh = wht(HypercubeFunction(h));
  for (std::size_t a = 0; a < f.size(); ++a) EXPECT_NEAR(sh[a], 2.5 * sf[a] - sg[a], 1e-12);
}

TEST(Wht, RejectsNonPowerOfTwo) {
  EXPECT_THROW(HypercubeFunction(std::vector<double>(3)), std::invalid_argument);
  EXPECT_THROW(FourierSpectrum(std::vector<double>{}), std::invalid_argument);
  std::vector<int> v(6);
  EXPECT_THROW(hadamard_inplace(std::span<int>(v)), std::invalid_argument);
}

TEST(Hadamard, IntegerButterflyIsExact) {
  std::vector<long long> v{1, 2, 3, 4};
  hadamard_inplace(std::span<long long>(v));
  EXPECT_EQ(v, (std::vector<long long>{10, -2, -4, 0}));
}

}  // namespace
}  // namespace lpmind
