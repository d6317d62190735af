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

// Nonadaptive codebreaker strategies. Every solver first builds a complete
// QueryPlan without touching the oracle, then asks all queries, then decodes.
//
// Inner-product strategies: for a binary tau, the sign query x = k*sigma with
// sigma_i = +1 where tau_i = 1 and -1 elsewhere answers
//
//   f(k sigma - y) = 1.h_even(y) + sigma.h_odd(y),
//
// and the two centering queries +-k*1 give 1.h_even(y) and 1.h_odd(y), hence
// tau.h_odd(y) = (sigma.h_odd(y) + 1.h_odd(y)) / 2. Shifting by M_min and
// dividing by Delta turns the odd values into well-separated digits phi.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <sstream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lpmind/codemaker.hpp"
#include "lpmind/detecting_matrix.hpp"
#include "lpmind/errors.hpp"
#include "lpmind/measures.hpp"

namespace lpmind {

enum class Strategy { separable, naive_basis, l2_basis, l2_matrix, linf };

constexpr std::string_view to_string(Strategy s) {
  switch (s) {
    case Strategy::separable: return "separable";
    case Strategy::naive_basis: return "naive-basis";
    case Strategy::l2_basis: return "l2-basis";
    case Strategy::l2_matrix: return "l2-matrix";
    case Strategy::linf: return "linf";
  }
  return "?";
}

enum class QueryRole { sign_row, all_plus, all_minus, basis, zero, linf_pair };

struct QueryPlan {
  std::vector<Query> queries;
  std::vector<QueryRole> roles;

  std::size_t size() const { return queries.size(); }
  void add(Query q, QueryRole role) {
    queries.push_back(std::move(q));
    roles.push_back(role);
  }
};

struct RecoveryResult {
  std::vector<int> recovered;
  std::size_t queries_used = 0;
  Strategy strategy = Strategy::separable;
};

// Runs a fixed plan against the oracle, in order.
inline std::vector<double> ask_all(const QueryPlan& plan, const Oracle& oracle) {
  std::vector<double> answers;
  answers.reserve(plan.size());
  for (const auto& q : plan.queries) answers.push_back(oracle(q));
  return answers;
}

// Worst-case rounding in the measurements grows like n * d_max * s * nu
// ulps; 46 bits keeps it near 2^-6 against the 0.25 decoding tolerance.
inline constexpr double kPrecisionBits = 46.0;

// Radices sorted nondecreasing, with the coordinate each column stands for.
inline std::pair<RadixProfile, std::vector<std::size_t>> sorted_radices(const OddProfile& profile, std::size_t n);

inline bool separable_feasible(const OddProfile& profile, std::size_t n) {
  double d_max = 0;
  for (std::size_t i = 0; i < n; ++i) d_max = std::max(d_max, profile.at(i).radix());
  if (d_max > static_cast<double>(kMaxRadix)) return false;
  const unsigned nu = plan_size(sorted_radices(profile, n).first);
  return std::log2(static_cast<double>(n)) + std::log2(d_max) + nu + std::log2(nu + 1.0) <= kPrecisionBits;
}

// Radices sorted nondecreasing, with the coordinate each column stands for.
inline std::pair<RadixProfile, std::vector<std::size_t>> sorted_radices(const OddProfile& profile, std::size_t n) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return profile.at(a).radix() < profile.at(b).radix(); });
  std::vector<std::uint64_t> radices(n);
  for (std::size_t c = 0; c < n; ++c) radices[c] = static_cast<std::uint64_t>(profile.at(order[c]).radix());
  return {RadixProfile(std::move(radices)), std::move(order)};
}

// Everything an inner-product strategy decides before the first answer.
struct InnerProductPlan {
  SeparableMeasure measure;
  std::size_t n = 0;
  int k = 0;
  OddProfile profile;
  Strategy strategy = Strategy::separable;
  // Detecting-matrix design; empty for the standard-basis design.
  std::optional<DetectingMatrix> matrix;
  // column_coord[c] is the coordinate carried by matrix column c.
  std::vector<std::size_t> column_coord;
  // First two queries are +k*1 and -k*1, then one sign query per row.
  QueryPlan queries;
};

namespace detail {

inline void add_centering(QueryPlan& plan, std::size_t n, int k) {
  plan.add(Query(n, k), QueryRole::all_plus);
  plan.add(Query(n, -k), QueryRole::all_minus);
}

inline void check_dims(std::size_t n, int k, const char* who) {
  if (n < 1) throw std::invalid_argument(std::string(who) + ": n must be >= 1");
  if (k < 1) throw std::invalid_argument(std::string(who) + ": k must be >= 1");
}

}  // namespace detail

inline InnerProductPlan plan_separable(const SeparableMeasure& m, std::size_t n, int k,
                                       std::optional<DetectingMatrix> prebuilt = std::nullopt) {
  detail::check_dims(n, k, "plan_separable");
  InnerProductPlan plan{m, n, k, build_odd_profile(m, k), Strategy::separable, std::nullopt, {}, {}};
  if (!separable_feasible(plan.profile, n)) {
    throw std::domain_error("plan_separable: " + m.spec() + " at n=" + std::to_string(n) + ", k=" + std::to_string(k) +
                            " exceeds the double precision budget");
  }
  auto [radices, order] = sorted_radices(plan.profile, n);
  if (prebuilt) {
    if (prebuilt->radices() != radices) {
      throw std::invalid_argument("plan_separable: supplied matrix was built for different radices");
    }
    plan.matrix = std::move(prebuilt);
  } else {
    plan.matrix = construct(radices);
  }
  plan.column_coord = std::move(order);
  detail::add_centering(plan.queries, n, k);
  const DetectingMatrix& mat = *plan.matrix;
  for (std::size_t r = 0; r < mat.rows(); ++r) {
    Query x(n, -k);
    for (std::size_t c = 0; c < n; ++c) if (mat.at(r, c)) x[plan.column_coord[c]] = k;
    plan.queries.add(std::move(x), QueryRole::sign_row);
  }
  return plan;
}

inline InnerProductPlan plan_naive_basis(const SeparableMeasure& m, std::size_t n, int k) {
  detail::check_dims(n, k, "plan_naive_basis");
  InnerProductPlan plan{m, n, k, build_odd_profile(m, k), Strategy::naive_basis, std::nullopt, {}, {}};
  detail::add_centering(plan.queries, n, k);
  for (std::size_t i = 0; i < n; ++i) {
    Query x(n, -k);
    x[i] = k;
    plan.queries.add(std::move(x), QueryRole::basis);
  }
  return plan;
}

// tau.phi(y) for every sign row, from the raw oracle reports.
inline std::vector<double> sign_row_measurements(const InnerProductPlan& plan, std::span<const double> answers) {
  if (answers.size() != plan.queries.size()) {
    throw std::invalid_argument("sign_row_measurements: answer count does not match the plan");
  }
  const auto sum = [&](std::size_t i) { return plan.measure.sum_from_report(answers[i]); };
  const double plus = sum(0);
  const double minus = sum(1);
  const double even_total = (plus + minus) / 2.0;
  const double odd_total = (plus - minus) / 2.0;
  const double delta = plan.profile.delta();

  std::vector<double> out(plan.queries.size() - 2);
  for (std::size_t r = 0; r < out.size(); ++r) {
    const Query& x = plan.queries.queries[r + 2];
    const double sigma_odd = sum(r + 2) - even_total;
    const double tau_odd = (sigma_odd + odd_total) / 2.0;
    double tau_min = 0;
    for (std::size_t i = 0; i < plan.n; ++i) if (x[i] == plan.k) tau_min += plan.profile.at(i).m_min();
    out[r] = (tau_odd - tau_min) / delta;
  }
  return out;
}

inline std::vector<int> decode_inner_products(const InnerProductPlan& plan, std::span<const double> answers) {
  const std::vector<double> meas = sign_row_measurements(plan, answers);
  std::vector<int> y(plan.n);
  if (!plan.matrix) {
    for (std::size_t i = 0; i < plan.n; ++i) y[i] = plan.profile.at(i).lookup(meas[i]);
    return y;
  }
  std::vector<std::vector<double>> images(plan.n);
  for (std::size_t c = 0; c < plan.n; ++c) images[c] = plan.profile.at(plan.column_coord[c]).images();
  const DigitTuple digits = decode_digits(*plan.matrix, meas, DigitImageSet(std::move(images)));
  for (std::size_t c = 0; c < plan.n; ++c) {
    const std::size_t i = plan.column_coord[c];
    y[i] = plan.profile.at(i).lookup(digits[c]);
  }
  return y;
}

inline RecoveryResult execute(const InnerProductPlan& plan, const Oracle& oracle) {
  const std::vector<double> answers = ask_all(plan.queries, oracle);
  return {decode_inner_products(plan, answers), answers.size(), plan.strategy};
}

inline RecoveryResult solve_separable(const SeparableMeasure& m, std::size_t n, int k, const Oracle& oracle) {
  return execute(plan_separable(m, n, k), oracle);
}

inline RecoveryResult solve_naive_basis(const SeparableMeasure& m, std::size_t n, int k, const Oracle& oracle) {
  return execute(plan_naive_basis(m, n, k), oracle);
}

// Re-evaluates every answer against the recovered vector; throws
// oracle_inconsistency on the first mismatch beyond rel_tol.
inline void verify_answers(const SeparableMeasure& m, const QueryPlan& plan, std::span<const double> answers,
                           std::span<const int> recovered, double rel_tol = 1e-9) {
  for (std::size_t q = 0; q < plan.size(); ++q) {
    std::vector<int> diff(recovered.size());
    for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = recovered[i] - plan.queries[q][i];
    const double expect = eval_distance(m, diff);
    if (std::abs(expect - answers[q]) > rel_tol * std::max(1.0, std::abs(expect))) {
      std::ostringstream os;
      os << "verify_answers: query " << q << " answered " << answers[q] << ", recovered vector implies " << expect;
      throw oracle_inconsistency(os.str());
    }
  }
}

enum class L2Mode { basis, matrix, automatic };

namespace detail {

inline long long integral_or_throw(double v, const char* who) {
  const double r = std::round(v);
  if (std::abs(v - r) > 1e-6 * std::max(1.0, std::abs(v))) {
    std::ostringstream os;
    os << who << ": expected an integer, got " << v;
    throw oracle_inconsistency(os.str());
  }
  return static_cast<long long>(r);
}

}  // namespace detail

// l2 through <x,y> = (|x|^2 + |y|^2 - |x - y|^2) / 2, after a zero query.
// basis: n unit vectors (n+1 queries). matrix: detecting-matrix rows applied
// to y + k*1 in {0..2k}^n (s+1 queries).
inline RecoveryResult solve_l2_direct(std::size_t n, int k, const Oracle& oracle, L2Mode mode = L2Mode::automatic) {
  detail::check_dims(n, k, "solve_l2_direct");
  const RadixProfile radices = RadixProfile::uniform(n, static_cast<std::uint64_t>(2 * k + 1));
  if (mode == L2Mode::automatic) {
    const std::size_t s = std::size_t{1} << plan_size(radices);
    mode = s < n ? L2Mode::matrix : L2Mode::basis;
  }
  std::optional<DetectingMatrix> mat;
  QueryPlan plan;
  plan.add(Query(n, 0), QueryRole::zero);
  if (mode == L2Mode::basis) {
    for (std::size_t i = 0; i < n; ++i) {
      Query x(n, 0);
      x[i] = 1;
      plan.add(std::move(x), QueryRole::basis);
    }
  } else {
    mat = construct(radices);
    for (std::size_t r = 0; r < mat->rows(); ++r) {
      Query x(mat->row(r).begin(), mat->row(r).end());
      plan.add(std::move(x), QueryRole::sign_row);
    }
  }

  const std::vector<double> answers = ask_all(plan, oracle);
  const long long norm_sq = detail::integral_or_throw(answers[0] * answers[0], "solve_l2_direct");
  std::vector<long long> inner(plan.size() - 1);
  for (std::size_t q = 1; q < plan.size(); ++q) {
    long long x_sq = 0;
    for (int v : plan.queries[q]) x_sq += static_cast<long long>(v) * v;
    const long long dist_sq = detail::integral_or_throw(answers[q] * answers[q], "solve_l2_direct");
    const long long twice = x_sq + norm_sq - dist_sq;
    if (twice % 2 != 0) throw oracle_inconsistency("solve_l2_direct: odd doubled inner product");
    inner[q - 1] = twice / 2;
  }

  RecoveryResult res;
  res.queries_used = answers.size();
  res.recovered.resize(n);
  if (mode == L2Mode::basis) {
    res.strategy = Strategy::l2_basis;
    for (std::size_t i = 0; i < n; ++i) res.recovered[i] = static_cast<int>(inner[i]);
  } else {
    res.strategy = Strategy::l2_matrix;
    std::vector<double> meas(mat->rows());
    for (std::size_t r = 0; r < mat->rows(); ++r) {
      long long wt = 0;
      for (auto e : mat->row(r)) wt += e;
      meas[r] = static_cast<double>(inner[r] + k * wt);
    }
    const DigitTuple u = decode_digits(*mat, meas, DigitImageSet::integers(radices));
    for (std::size_t i = 0; i < n; ++i) res.recovered[i] = static_cast<int>(u[i]) - k;
  }
  for (int v : res.recovered) {
    if (v < -k || v > k) throw oracle_inconsistency("solve_l2_direct: recovered entry outside [-k, k]");
  }
  return res;
}

// l_inf with the 2n queries +-k e_i.
inline RecoveryResult solve_linf(std::size_t n, int k, const Oracle& oracle) {
  detail::check_dims(n, k, "solve_linf");
  QueryPlan plan;
  for (std::size_t i = 0; i < n; ++i) {
    Query plus(n, 0), minus(n, 0);
    plus[i] = k;
    minus[i] = -k;
    plan.add(std::move(plus), QueryRole::linf_pair);
    plan.add(std::move(minus), QueryRole::linf_pair);
  }
  const std::vector<double> answers = ask_all(plan, oracle);
  RecoveryResult res;
  res.queries_used = answers.size();
  res.strategy = Strategy::linf;
  res.recovered.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const long long q_plus = detail::integral_or_throw(answers[2 * i], "solve_linf");
    const long long q_minus = detail::integral_or_throw(answers[2 * i + 1], "solve_linf");
    if (q_plus > k && q_minus > k) throw oracle_inconsistency("solve_linf: both probes exceed k");
    if (q_minus > k) res.recovered[i] = static_cast<int>(q_minus - k);
    else if (q_plus > k) res.recovered[i] = -static_cast<int>(q_plus - k);
    else res.recovered[i] = 0;
    if (std::abs(res.recovered[i]) > k) throw oracle_inconsistency("solve_linf: recovered entry outside [-k, k]");
  }
  return res;
}

// Planned oracle calls for a strategy; nullopt when it does not apply.
inline std::optional<std::size_t> planned_queries(Strategy s, const SeparableMeasure& m, std::size_t n, int k) {
  switch (s) {
    case Strategy::linf:
      return m.kind() == MeasureKind::linf ? std::optional{2 * n} : std::nullopt;
    case Strategy::l2_basis:
      return n + 1;
    case Strategy::l2_matrix:
      return (std::size_t{1} << plan_size(RadixProfile::uniform(n, static_cast<std::uint64_t>(2 * k + 1)))) + 1;
    case Strategy::naive_basis:
      return m.separable() ? std::optional{n + 2} : std::nullopt;
    case Strategy::separable: {
      if (!m.separable()) return std::nullopt;
      const OddProfile prof = build_odd_profile(m, k);
      if (!separable_feasible(prof, n)) return std::nullopt;
      return (std::size_t{1} << plan_size(sorted_radices(prof, n).first)) + 2;
    }
  }
  return std::nullopt;
}

// Cheaper of naive-basis (n+2) and separable (s+2); ties go to naive-basis.
inline Strategy choose_strategy(const SeparableMeasure& m, std::size_t n, int k) {
  if (m.kind() == MeasureKind::linf) return Strategy::linf;
  build_odd_profile(m, k);  // surfaces degenerate measures
  const auto sep = planned_queries(Strategy::separable, m, n, k);
  return sep && *sep < n + 2 ? Strategy::separable : Strategy::naive_basis;
}

inline RecoveryResult solve(Strategy s, const SeparableMeasure& m, std::size_t n, int k, const Oracle& oracle) {
  const bool is_l2 = m.kind() == MeasureKind::lp && m.parameter() == 2.0;
  switch (s) {
    case Strategy::separable: return solve_separable(m, n, k, oracle);
    case Strategy::naive_basis: return solve_naive_basis(m, n, k, oracle);
    case Strategy::l2_basis:
    case Strategy::l2_matrix:
      if (!is_l2) throw std::invalid_argument("solve: l2 strategies need lp:2");
      return solve_l2_direct(n, k, oracle, s == Strategy::l2_basis ? L2Mode::basis : L2Mode::matrix);
    case Strategy::linf:
      if (m.kind() != MeasureKind::linf) throw std::invalid_argument("solve: linf strategy needs lp:inf");
      return solve_linf(n, k, oracle);
  }
  throw std::logic_error("solve: unknown strategy");
}

}  // namespace lpmind
