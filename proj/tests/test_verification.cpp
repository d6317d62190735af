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

#include <cstdlib>
#include <string>
#include <vector>

#include "lpmind/detecting_matrix.hpp"
#include "lpmind/errors.hpp"
#include "lpmind/verification.hpp"
#include "oracles.hpp"

namespace lpmind {
namespace {

struct Dense {
  std::vector<std::vector<int>> rows_;
  std::size_t rows() const { return rows_.size(); }
  std::size_t cols() const { return rows_.front().size(); }
  int at(std::size_t r, std::size_t c) const { return rows_[r][c]; }
};

TEST(ForEachInBox, VisitsEveryPointOnce) {
  std::vector<std::vector<int>> seen;
  for_each_in_box({-1, 0}, {1, 2}, [&](const std::vector<int>& v) { seen.push_back(v); });
  EXPECT_EQ(seen.size(), 9u);
  EXPECT_EQ(seen.front(), (std::vector<int>{-1, 0}));
  EXPECT_EQ(seen[1], (std::vector<int>{0, 0}));
  EXPECT_EQ(seen.back(), (std::vector<int>{1, 2}));
}

TEST(DetectingCheck, IdentityAndCollision) {
  const Dense id{{{1, 0}, {0, 1}}};
  EXPECT_TRUE(detecting_property_check(id, RadixProfile({3, 3})).pass());
  const Dense sum{{{1, 1}}};
  const auto rep = detecting_property_check(sum, RadixProfile({2, 2}));
  EXPECT_EQ(rep.total, 4u);
  EXPECT_EQ(rep.failures.size(), 1u);
  EXPECT_THROW(detecting_property_check(sum, RadixProfile({2, 2, 2})), std::invalid_argument);
}

TEST(DetectingCheck, AgreesWithOracle) {
  for (const auto& r : {RadixProfile({2, 2, 3, 4}), RadixProfile::uniform(5, 3)}) {
    const DetectingMatrix m = construct(r);
    std::vector<std::uint64_t> d(r.values().begin(), r.values().end());
    EXPECT_EQ(detecting_property_check(m, r).failures.size(), oracle::detecting_collisions(m, d));
  }
}

TEST(RecoveryCheck, SmallBoxes) {
  const auto rep = exhaustive_recovery_check(parse_measure("lp:2"), 3, 1, Strategy::separable);
  EXPECT_EQ(rep.total, 27u);
  EXPECT_TRUE(rep.pass());
  EXPECT_TRUE(exhaustive_recovery_check(parse_measure("lp:inf"), 2, 2, Strategy::linf).pass());
}

TEST(Caps, RefuseLargeBoxes) {
  EXPECT_THROW(exhaustive_recovery_check(parse_measure("lp:2"), 20, 3, Strategy::naive_basis), feasibility_error);
  const DetectingMatrix m = construct(RadixProfile::uniform(40, 2));
  EXPECT_THROW(detecting_property_check(m, m.radices()), feasibility_error);
}

TEST(Caps, EnvironmentOnlyRaises) {
  ::setenv("LPMIND_VERIFY_CAP", "10", 1);
  EXPECT_EQ(verification_cap(100), 100u);
  ::setenv("LPMIND_VERIFY_CAP", "5000", 1);
  EXPECT_EQ(verification_cap(100), 5000u);
  ::setenv("LPMIND_VERIFY_CAP", "abc", 1);
  EXPECT_EQ(verification_cap(100), 100u);
  ::unsetenv("LPMIND_VERIFY_CAP");
  EXPECT_EQ(verification_cap(100), 100u);
}

}  // namespace
}  // namespace lpmind
