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

#pragma once

// Brute-force ground truth over small boxes.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lpmind/codebreaker.hpp"
#include "lpmind/codemaker.hpp"
#include "lpmind/detecting_matrix.hpp"
#include "lpmind/errors.hpp"
#include "lpmind/measures.hpp"

namespace lpmind {

inline constexpr std::size_t kDetectingCheckCap = 1'000'000;
inline constexpr std::size_t kRecoveryCheckCap = 100'000;

// Default cap, raised (never lowered) by LPMIND_VERIFY_CAP.
inline std::size_t verification_cap(std::size_t fallback) {
  if (const char* env = std::getenv("LPMIND_VERIFY_CAP")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > fallback) return static_cast<std::size_t>(v);
  }
  return fallback;
}

struct ExhaustiveReport {
  std::size_t total = 0;
  // (hidden, recovered) for recovery checks; (u, v) colliding pairs for the
  // detecting check. Empty recovered means the solver threw.
  std::vector<std::pair<std::vector<int>, std::vector<int>>> failures;
  std::vector<std::string> messages;

  bool pass() const { return failures.empty(); }
};

// Calls visit(v) for every v in prod_i {lo_i..hi_i}, first coordinate fastest.
template <typename Visit>
void for_each_in_box(const std::vector<int>& lo, const std::vector<int>& hi, Visit&& visit) {
  std::vector<int> v = lo;
  while (true) {
    visit(static_cast<const std::vector<int>&>(v));
    std::size_t i = 0;
    while (i < v.size() && v[i] == hi[i]) {
      v[i] = lo[i];
      ++i;
    }
    if (i == v.size()) return;
    ++v[i];
  }
}

// Every u != v in the radix box must give M u != M v. Works on anything with
// rows(), cols() and at(r, c); products are exact integers.
template <typename Matrix>
ExhaustiveReport detecting_property_check(const Matrix& m, const RadixProfile& radices) {
  if (m.cols() != radices.size()) throw std::invalid_argument("detecting_property_check: width mismatch");
  const std::size_t cap = verification_cap(kDetectingCheckCap);
  if (radices.box_size() > cap) {
    throw feasibility_error("detecting_property_check: box of " + std::to_string(radices.box_size()) +
                            " vectors exceeds cap " + std::to_string(cap));
  }
  ExhaustiveReport rep;
  std::map<std::vector<std::int64_t>, std::vector<int>> seen;
  std::vector<int> lo(radices.size(), 0), hi(radices.size());
  for (std::size_t i = 0; i < radices.size(); ++i) hi[i] = static_cast<int>(radices[i] - 1);
  for_each_in_box(lo, hi, [&](const std::vector<int>& u) {
    ++rep.total;
    std::vector<std::int64_t> image(m.rows(), 0);
    for (std::size_t r = 0; r < m.rows(); ++r) {
      for (std::size_t c = 0; c < m.cols(); ++c) {
        if (m.at(r, c)) image[r] += u[c];
      }
    }
    auto [it, inserted] = seen.emplace(std::move(image), u);
    if (!inserted) rep.failures.emplace_back(it->second, u);
  });
  return rep;
}

// Runs the strategy against an honest oracle for every hidden vector in
// {-k..k}^n.
inline ExhaustiveReport exhaustive_recovery_check(const SeparableMeasure& m, std::size_t n, int k,
                                                  Strategy strategy) {
  const std::size_t cap = verification_cap(kRecoveryCheckCap);
  const double cases = std::pow(2.0 * k + 1.0, static_cast<double>(n));
  if (cases > static_cast<double>(cap)) {
    throw feasibility_error("exhaustive_recovery_check: " + std::to_string(static_cast<long long>(cases)) +
                            " hidden vectors exceed cap " + std::to_string(cap));
  }
  std::optional<InnerProductPlan> plan;
  if (strategy == Strategy::separable) plan = plan_separable(m, n, k);
  if (strategy == Strategy::naive_basis) plan = plan_naive_basis(m, n, k);

  ExhaustiveReport rep;
  for_each_in_box(std::vector<int>(n, -k), std::vector<int>(n, k), [&](const std::vector<int>& y) {
    ++rep.total;
    const Oracle oracle = make_honest_oracle(HiddenVector(y, k), m);
    try {
      const RecoveryResult res = plan ? execute(*plan, oracle) : solve(strategy, m, n, k, oracle);
      if (res.recovered != y) rep.failures.emplace_back(y, res.recovered);
    } catch (const std::exception& e) {
      rep.failures.emplace_back(y, std::vector<int>{});
      rep.messages.emplace_back(e.what());
    }
  });
  return rep;
}

}  // namespace lpmind
