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

#include <sstream>
#include <stdexcept>
#include <vector>

#include "lpmind/detecting_matrix.hpp"
#include "lpmind/errors.hpp"
#include "lpmind/random.hpp"
#include "oracles.hpp"

namespace lpmind {
namespace {

std::vector<double> as_double(const std::vector<std::uint64_t>& u) { return {u.begin(), u.end()}; }

TEST(RadixProfile, Validation) {
  EXPECT_THROW(RadixProfile({1, 2}), std::invalid_argument);
  EXPECT_THROW(RadixProfile({3, 2}), std::invalid_argument);
  const RadixProfile r({2, 3, 5});
  EXPECT_EQ(r.size(), 3u);
  EXPECT_DOUBLE_EQ(r.total(), 10.0);
  EXPECT_EQ(r.box_size(), 30u);
  EXPECT_EQ(RadixProfile::uniform(4, 2), RadixProfile({2, 2, 2, 2}));
}

TEST(PlanGroups, FourBinaryColumnsOnTwoBits) {
  const GroupPlan plan = plan_groups(RadixProfile::uniform(4, 2), 2);
  ASSERT_EQ(plan.groups.size(), 3u);
  EXPECT_EQ(plan.groups[0].character.to_string(), "11");
  EXPECT_EQ(plan.groups[0].length, 2u);
  EXPECT_EQ(plan.groups[1].character.to_string(), "01");
  EXPECT_EQ(plan.groups[1].length, 1u);
  EXPECT_EQ(plan.groups[2].character.to_string(), "10");
  EXPECT_EQ(plan.groups[2].length, 1u);
  EXPECT_EQ(plan.columns(), 4u);
}

TEST(PlanGroups, CapacityFailure) {
  EXPECT_THROW(plan_groups(RadixProfile::uniform(8, 2), 1), capacity_error);
  EXPECT_FALSE(try_plan_groups(RadixProfile::uniform(8, 2), 1).has_value());
}

TEST(PlanGroups, RulesAgreeOnBinaryColumns) {
  for (std::size_t n = 1; n <= 40; ++n) {
    const RadixProfile r = RadixProfile::uniform(n, 2);
    EXPECT_EQ(plan_size(r, CapacityRule::column_weight), plan_size(r, CapacityRule::product_bound)) << n;
  }
}

TEST(PlanSize, MonotoneInRadixAndLength) {
  for (std::uint64_t d = 2; d <= 17; ++d) {
    unsigned prev = 0;
    for (std::size_t n = 1; n <= 70; n += 3) {
      const unsigned nu = plan_size(RadixProfile::uniform(n, d));
      EXPECT_GE(nu, prev);
      prev = nu;
    }
  }
}

TEST(PlanSize, SixtyFourColumns) {
  for (std::uint64_t d : {5u, 9u, 17u}) {
    const RadixProfile r = RadixProfile::uniform(64, d);
    EXPECT_EQ(plan_size(r), 6u) << d;
    EXPECT_TRUE(size_bound(r, 6).holds);
  }
}

TEST(SizeBound, VacuousForSmallS) {
  const SizeBound b = size_bound(16, 100, 200.0);
  EXPECT_TRUE(b.holds);
  EXPECT_DOUBLE_EQ(b.lhs, 0.0);
  const SizeBound c = size_bound(64, 64, 128.0);
  EXPECT_DOUBLE_EQ(c.lhs, 128.0);
  EXPECT_DOUBLE_EQ(c.rhs, 128.0);
  EXPECT_TRUE(c.holds);
  EXPECT_FALSE(size_bound(128, 64, 128.0).holds);
}

TEST(Construct, ColumnsAreTriangular) {
  for (const auto& r : {RadixProfile::uniform(4, 2), RadixProfile({2, 3, 3, 4}), RadixProfile::uniform(20, 5),
                        RadixProfile::uniform(64, 17)}) {
    const DetectingMatrix m = construct(r);
    EXPECT_FALSE(check_column_spectra(m).has_value());
    for (std::size_t j = 0; j < m.cols(); ++j) {
      std::vector<double> col(m.rows());
      for (std::size_t p = 0; p < m.rows(); ++p) col[p] = m.at(p, j);
      const auto spec = oracle::naive_wht(col, m.dimension());
      const Group& g = m.group_of(j);
      EXPECT_NEAR(spec[g.character.mask()],
                  static_cast<double>(m.column_weight(j)) / static_cast<double>(1u << g.character.weight()), 1e-12);
      if (m.dimension() > 6) break;
    }
  }
}

TEST(Construct, BruteForceDetecting) {
  for (const auto& r : {RadixProfile::uniform(4, 2), RadixProfile({2, 3, 4}), RadixProfile({3, 3, 4, 4}),
                        RadixProfile::uniform(6, 2), RadixProfile({2, 2, 2, 3, 4})}) {
    const DetectingMatrix m = construct(r);
    std::vector<std::uint64_t> d(r.values().begin(), r.values().end());
    EXPECT_EQ(oracle::detecting_collisions(m, d), 0u);
  }
}

TEST(Construct, ProductRuleNeedsMoreRowsOrFails) {
  const RadixProfile r = RadixProfile::uniform(64, 5);
  EXPECT_GT(plan_size(r, CapacityRule::product_bound), plan_size(r));
  EXPECT_THROW(construct(r, plan_size(r, CapacityRule::product_bound) - 1, CapacityRule::product_bound),
               capacity_error);
}

TEST(Construct, MultiplyMatchesEntries) {
  const DetectingMatrix m = construct(RadixProfile({2, 3, 5, 5}));
  const std::vector<std::int64_t> u{1, 2, 4, 3};
  const auto exact = m.multiply_exact(u);
  const auto approx = m.multiply(std::vector<double>{1, 2, 4, 3});
  for (std::size_t r = 0; r < m.rows(); ++r) {
    std::int64_t acc = 0;
    for (std::size_t c = 0; c < m.cols(); ++c) acc += m.at(r, c) * u[c];
    EXPECT_EQ(exact[r], acc);
    EXPECT_DOUBLE_EQ(approx[r], static_cast<double>(acc));
  }
}

TEST(Assemble, RejectsBadEntries) {
  const RadixProfile r = RadixProfile::uniform(2, 2);
  const GroupPlan plan = plan_groups(r, 2);
  EXPECT_THROW(DetectingMatrix::assemble(r, plan, std::vector<std::uint8_t>(7, 0)), std::invalid_argument);
  EXPECT_THROW(DetectingMatrix::assemble(r, plan, std::vector<std::uint8_t>(8, 2)), std::invalid_argument);
}

TEST(CheckColumnSpectra, FlagsCorruptedColumn) {
  const RadixProfile r = RadixProfile::uniform(4, 2);
  const DetectingMatrix good = construct(r);
  std::vector<std::uint8_t> entries;
  for (std::size_t p = 0; p < good.rows(); ++p) for (auto e : good.row(p)) entries.push_back(e);
  entries[0] ^= 1;
  const DetectingMatrix bad = DetectingMatrix::assemble(r, good.plan(), entries);
  EXPECT_TRUE(check_column_spectra(bad).has_value());
}

TEST(DecodeDigits, RecoversEveryTupleInTheBox) {
  const RadixProfile r({2, 3, 3, 4, 5});
  const DetectingMatrix m = construct(r);
  const DigitImageSet images = DigitImageSet::integers(r);
  std::vector<std::uint64_t> u(r.size(), 0);
  while (true) {
    const auto phi = as_double(u);
    EXPECT_EQ(decode_digits(m, m.multiply(phi), images), phi);
    std::size_t i = 0;
    while (i < u.size() && u[i] + 1 == r[i]) u[i++] = 0;
    if (i == u.size()) break;
    ++u[i];
  }
}

TEST(DecodeDigits, RandomLargeProfile) {
  const RadixProfile r = RadixProfile::uniform(64, 17);
  const DetectingMatrix m = construct(r);
  const DigitImageSet images = DigitImageSet::integers(r);
  Rng rng(3);
  for (int t = 0; t < 50; ++t) {
    std::vector<double> phi(64);
    for (auto& v : phi) v = static_cast<double>(uniform_below(rng, 17));
    EXPECT_EQ(decode_digits(m, m.multiply(phi), images), phi);
  }
}

TEST(DecodeDigits, RejectsInconsistentMeasurement) {
  const RadixProfile r = RadixProfile::uniform(4, 2);
  const DetectingMatrix m = construct(r);
  auto y = m.multiply(std::vector<double>{1, 0, 1, 1});
  y[1] += 7.0;
  EXPECT_THROW(decode_digits(m, y, DigitImageSet::integers(r)), decode_error);
  EXPECT_THROW(decode_digits(m, std::vector<double>(3), DigitImageSet::integers(r)), std::invalid_argument);
}

TEST(DigitImageSet, Validation) {
  EXPECT_THROW(DigitImageSet({{0.0, 0.5}}), std::invalid_argument);
  EXPECT_THROW(DigitImageSet(std::vector<std::vector<double>>(1)), std::invalid_argument);
  const DigitImageSet s({{1.5, 0.0}});
  EXPECT_DOUBLE_EQ(s[0][0], 0.0);
  EXPECT_TRUE(s.fits(RadixProfile({3})));
  EXPECT_FALSE(s.fits(RadixProfile({2})));
}

TEST(GroupPsi, StrictlyIncreasingInLexOrder) {
  const RadixProfile r({2, 3, 4});
  const DetectingMatrix m = construct(r, 3);
  for (const Group& g : m.plan().groups) {
    double prev = -1;
    std::vector<double> z(g.length, 0.0);
    while (true) {
      const double psi = group_psi(m, g, z);
      EXPECT_GT(psi, prev);
      prev = psi;
      std::size_t i = 0;
      while (i < g.length && z[i] + 1 == static_cast<double>(r[g.start + i])) z[i++] = 0;
      if (i == g.length) break;
      z[i] += 1;
    }
  }
}

TEST(MatrixFile, RoundTrip) {
  const DetectingMatrix m = construct(RadixProfile({2, 3, 5, 5, 9}));
  std::stringstream ss;
  save_matrix(ss, m);
  const DetectingMatrix back = load_matrix(ss);
  EXPECT_EQ(back.radices(), m.radices());
  EXPECT_EQ(back.dimension(), m.dimension());
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) EXPECT_EQ(back.at(r, c), m.at(r, c));
}

TEST(MatrixFile, RejectsMalformed) {
  std::stringstream empty;
  EXPECT_THROW(load_matrix(empty), std::invalid_argument);
  std::stringstream header("n=2 nu=1\n");
  EXPECT_THROW(load_matrix(header), std::invalid_argument);
  std::stringstream truncated("nu=2 n=2\n2\n2\n10\n");
  EXPECT_THROW(load_matrix(truncated), std::invalid_argument);
  const DetectingMatrix m = construct(RadixProfile::uniform(3, 2));
  std::stringstream ss;
  save_matrix(ss, m);
  std::string text = ss.str();
  text[text.size() - 2] = text[text.size() - 2] == '0' ? '1' : '0';
  std::stringstream tampered(text);
  EXPECT_ANY_THROW(load_matrix(tampered));
}

}  // namespace
}  // namespace lpmind
